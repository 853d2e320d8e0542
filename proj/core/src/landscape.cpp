#include "tinsim/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "tinsim/backaction.hpp"
#include "tinsim/transduction.hpp"

namespace tinsim {

double TinReference::scaled(double kappa_new, double coupling_new, double temperature_new,
                            double nu_new) const {
  if (!(kappa > 0.0) || !(coupling_G > 0.0) || !(temperature > 0.0)) {
    throw std::invalid_argument("TinReference: kappa, coupling and temperature must be > 0");
  }
  const double ref_prefactor = tin_prefactor(nu);
  if (ref_prefactor == 0.0) {
    throw std::invalid_argument("TinReference: reference taken at the magic detuning");
  }
  const double g = coupling_new / coupling_G;
  const double k = kappa / kappa_new;
  const double t = temperature_new / temperature;
  return s_rin_tin * (g * g * g * g) * (k * k * k * k) * (t * t) * tin_prefactor(nu_new) /
         ref_prefactor;
}

namespace {

void check_spec(const SystemParams& base, const LandscapeSpec& spec) {
  base.validate();
  auto positive_increasing = [](const std::vector<double>& v, const char* what) {
    if (v.empty()) throw std::invalid_argument(std::string("landscape: empty ") + what);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] > 0.0)) throw std::invalid_argument(std::string("landscape: ") + what + " must be > 0");
      if (i > 0 && !(v[i] > v[i - 1])) {
        throw std::invalid_argument(std::string("landscape: ") + what + " must increase");
      }
    }
  };
  positive_increasing(spec.kappas, "kappa range");
  positive_increasing(spec.powers, "power range");
  if (spec.temperatures.empty()) throw std::invalid_argument("landscape: no temperatures");
}

LandscapePoint evaluate(const SystemParams& base, const LandscapeSpec& spec, double temperature,
                        double kappa, double p_in) {
  MechanicalMode mode = base.probe();
  mode.temperature = temperature;
  CavityParams cavity = base.cavity;
  cavity.kappa = kappa;
  cavity.detuning_nu = spec.nu;
  cavity.n_cav = photon_number_from_power(p_in, cavity);

  LandscapePoint p{kappa, p_in, spec.nu, temperature, cavity.n_cav, 0.0, true};
  const DynamicalBackaction dba = dynamical_backaction(mode, cavity);
  if (!dba.stable) {
    p.stable = false;
    return p;
  }
  const double s = spec.reference.scaled(kappa, mode.coupling_G, temperature, spec.nu);
  p.cq = cq_with_tin(mode, cavity, s);
  return p;
}

}  // namespace

std::vector<LandscapePoint> cq_landscape(const SystemParams& base, const LandscapeSpec& spec,
                                         unsigned threads) {
  check_spec(base, spec);
  const std::size_t nk = spec.kappas.size();
  const std::size_t np = spec.powers.size();
  const std::size_t total = spec.temperatures.size() * nk * np;
  std::vector<LandscapePoint> out(total);

  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t idx = first; idx < total; idx += stride) {
      const std::size_t t = idx / (nk * np);
      const std::size_t k = (idx / np) % nk;
      const std::size_t p = idx % np;
      out[idx] = evaluate(base, spec, spec.temperatures[t], spec.kappas[k], spec.powers[p]);
    }
  };

  const unsigned n_workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
  if (n_workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work, w, n_workers);
  }
  return out;
}

std::vector<OptimumPoint> cq_optimum_curve(const SystemParams& base, const LandscapeSpec& spec) {
  check_spec(base, spec);
  std::vector<OptimumPoint> out;
  for (double temperature : spec.temperatures) {
    for (double kappa : spec.kappas) {
      MechanicalMode mode = base.probe();
      mode.temperature = temperature;
      CavityParams cavity = base.cavity;
      cavity.kappa = kappa;
      cavity.detuning_nu = spec.nu;
      const double s = spec.reference.scaled(kappa, mode.coupling_G, temperature, spec.nu);
      OptimumPoint o;
      o.kappa = kappa;
      o.temperature = temperature;
      o.n_c = optimal_photon_number(mode, cavity, s);
      o.p_in = power_for_photon_number(o.n_c, cavity);
      cavity.n_cav = o.n_c;
      o.cq = cq_with_tin(mode, cavity, s);
      out.push_back(o);
    }
  }
  return out;
}

void write_landscape_csv(std::ostream& out, const LandscapeSpec& spec,
                         const std::vector<LandscapePoint>& points) {
  const auto& r = spec.reference;
  out << std::setprecision(10);
  out << "# reference s_rin_tin=" << r.s_rin_tin << " kappa_rad_s=" << r.kappa
      << " coupling_G=" << r.coupling_G << " temperature_k=" << r.temperature << " nu=" << r.nu
      << '\n';
  out << "# rescaling S_RIN^TIN ~ G^4 kappa^-4 T^2 c2(nu)^2\n";
  out << "kappa_rad_s,p_in_w,nu,temperature_k,n_c,cq,stable\n";
  for (const auto& p : points) {
    out << p.kappa << ',' << p.p_in << ',' << p.nu << ',' << p.temperature << ',' << p.n_c << ','
        << p.cq << ',' << (p.stable ? 1 : 0) << '\n';
  }
}

}  // namespace tinsim
