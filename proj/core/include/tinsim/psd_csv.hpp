#pragma once

#include <iosfwd>
#include <string>

#include "tinsim/grid.hpp"

namespace tinsim {

/// Writes `# units=<u> sidedness=<s>` followed by `frequency_hz,value` rows.
void write_psd_csv(std::ostream& out, const Psd& psd);
void write_psd_csv(const std::string& path, const Psd& psd);

/// Reads the format above. Also accepts extra comment lines, a header row
/// naming the columns in any order (`frequency_hz`/`frequency`/`f`, `value`/`psd`),
/// and files without the units comment (units default to `relative`).
/// Frequencies must be increasing and uniformly spaced to 1e-6 relative.
Psd read_psd_csv(std::istream& in);
Psd read_psd_csv(const std::string& path);

}  // namespace tinsim
