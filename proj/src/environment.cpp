#include "elpp/environment.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace elpp {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw ContractViolation("alpha must lie in (0,2)");
}

TimeSpacePoint lattice_site(std::uint64_t index, std::int64_t h) {
  const auto width = static_cast<std::uint64_t>(2 * h + 1);
  return {static_cast<double>(index / width + 1),
          static_cast<double>(static_cast<std::int64_t>(index % width) - h)};
}

std::uint64_t site_index(const TimeSpacePoint& p, std::int64_t h) {
  const auto width = static_cast<std::uint64_t>(2 * h + 1);
  return (static_cast<std::uint64_t>(p.t) - 1) * width +
         static_cast<std::uint64_t>(static_cast<std::int64_t>(p.x) + h);
}

// Partial Fisher-Yates: the first m slots of a virtual shuffle of [0, n_sites).
std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n_sites, std::size_t m,
                                                      Rng& rng) {
  std::unordered_map<std::uint64_t, std::uint64_t> swapped;
  swapped.reserve(2 * m);
  auto value_at = [&](std::uint64_t i) {
    auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  std::vector<std::uint64_t> out;
  out.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    const std::uint64_t j = i + rng.below(n_sites - i);
    const std::uint64_t vi = value_at(i);
    const std::uint64_t vj = value_at(j);
    out.push_back(vj);
    swapped[j] = vi;
  }
  return out;
}

TimeSpacePoint lattice_site_from_uniforms(double ut, double ux, std::int64_t n, std::int64_t h) {
  const auto width = 2 * h + 1;
  auto ti = static_cast<std::int64_t>(ut * static_cast<double>(n));
  auto xi = static_cast<std::int64_t>(ux * static_cast<double>(width));
  ti = std::min(ti, n - 1);
  xi = std::min(xi, width - 1);
  return {static_cast<double>(ti + 1), static_cast<double>(xi - h)};
}

}  // namespace

std::string to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::UniformCloud: return "uniform-cloud";
    case EnvKind::LatticeCloud: return "lattice-cloud";
    case EnvKind::LatticeField: return "lattice-field";
    case EnvKind::Ppp: return "ppp";
  }
  return "unknown";
}

EnvKind env_kind_from_string(const std::string& s) {
  if (s == "uniform-cloud") return EnvKind::UniformCloud;
  if (s == "lattice-cloud") return EnvKind::LatticeCloud;
  if (s == "lattice-field") return EnvKind::LatticeField;
  if (s == "ppp") return EnvKind::Ppp;
  throw ContractViolation("unknown environment kind '" + s + "'");
}

std::vector<TimeSpacePoint> Environment::locations() const {
  std::vector<TimeSpacePoint> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.location);
  return out;
}

void Environment::validate() const {
  for (std::size_t r = 0; r < entries.size(); ++r) {
    const auto& e = entries[r];
    if (!(e.weight >= 0.0)) throw ContractViolation("negative or NaN weight");
    if (r + 1 < entries.size() && entries[r + 1].weight > e.weight) {
      throw ContractViolation("weights are not in descending order");
    }
    if (!box.contains(e.location)) throw ContractViolation("entry lies outside the box");
  }
  if (kind == EnvKind::UniformCloud || kind == EnvKind::LatticeCloud) {
    for (const auto& e : entries) {
      if (e.weight != 1.0) throw ContractViolation("unweighted cloud with weight != 1");
    }
  }
  if (kind == EnvKind::LatticeCloud || kind == EnvKind::LatticeField) {
    std::unordered_set<std::uint64_t> seen;
    for (const auto& e : entries) {
      if (!seen.insert(site_index(e.location, box.h())).second) {
        throw ContractViolation("duplicate lattice site");
      }
    }
  }
}

Environment make_cloud(const Box& box, std::vector<TimeSpacePoint> points) {
  Environment env;
  env.kind = box.is_lattice() ? EnvKind::LatticeCloud : EnvKind::UniformCloud;
  env.box = box;
  env.method = "explicit";
  env.entries.reserve(points.size());
  for (const auto& p : points) env.entries.push_back({1.0, p});
  env.validate();
  return env;
}

Environment make_weighted(const Box& box, std::vector<Entry> entries,
                          std::optional<double> alpha) {
  Environment env;
  env.kind = box.is_lattice() ? EnvKind::LatticeField : EnvKind::Ppp;
  env.box = box;
  env.alpha = alpha;
  env.method = "explicit";
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.weight > b.weight; });
  env.entries = std::move(entries);
  env.validate();
  return env;
}

Environment sample_uniform_cloud(std::size_t m, const Box& box, const SeedSpec& seed) {
  if (m == 0) throw ContractViolation("sample_uniform_cloud: m must be >= 1");
  if (box.is_lattice()) throw ContractViolation("sample_uniform_cloud needs a continuous box");
  Rng rng = derive_stream(seed);
  Environment env;
  env.kind = EnvKind::UniformCloud;
  env.box = box;
  env.seed = seed;
  env.method = "iid-uniform";
  env.entries.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double t = box.t_max * rng.uniform();
    const double x = box.x_max * (2.0 * rng.uniform() - 1.0);
    env.entries.push_back({1.0, {t, x}});
  }
  return env;
}

Environment sample_lattice_cloud(std::size_t m, const Box& box, const SeedSpec& seed) {
  if (!box.is_lattice()) throw ContractViolation("sample_lattice_cloud needs a lattice box");
  const std::uint64_t sites = box.lattice_sites();
  if (m == 0 || m > sites) {
    throw ContractViolation("sample_lattice_cloud: need 1 <= m <= n(2h+1) = " +
                            std::to_string(sites));
  }
  Rng rng = derive_stream(seed);
  Environment env;
  env.kind = EnvKind::LatticeCloud;
  env.box = box;
  env.seed = seed;
  env.method = "partial-fisher-yates";
  env.entries.reserve(m);
  for (std::uint64_t idx : sample_without_replacement(sites, m, rng)) {
    env.entries.push_back({1.0, lattice_site(idx, box.h())});
  }
  return env;
}

Environment sample_lattice_field(const Box& box, double alpha, const SeedSpec& seed,
                                 std::size_t top_k) {
  check_alpha(alpha);
  if (!box.is_lattice()) throw ContractViolation("sample_lattice_field needs a lattice box");
  const std::uint64_t sites = box.lattice_sites();
  if (top_k == 0 || top_k > sites) {
    throw ContractViolation("sample_lattice_field: need 1 <= top_k <= n(2h+1)");
  }
  Rng rng = derive_stream(seed);

  std::vector<double> partial(top_k);
  std::vector<TimeSpacePoint> locs;
  locs.reserve(top_k);
  double acc = 0.0;
  if (2 * static_cast<std::uint64_t>(top_k) <= sites) {
    // Per record: E_r, then (U_t, U_x) with collisions redrawn in place. The
    // continuum sampler consumes the stream the same way.
    std::unordered_set<std::uint64_t> used;
    used.reserve(2 * top_k);
    for (std::size_t r = 0; r < top_k; ++r) {
      acc += rng.exponential();
      partial[r] = acc;
      for (;;) {
        const double ut = rng.uniform();
        const double ux = rng.uniform();
        const auto p = lattice_site_from_uniforms(ut, ux, box.n(), box.h());
        if (used.insert(site_index(p, box.h())).second) {
          locs.push_back(p);
          break;
        }
      }
    }
  } else {
    for (std::size_t r = 0; r < top_k; ++r) {
      acc += rng.exponential();
      partial[r] = acc;
    }
    for (std::uint64_t idx : sample_without_replacement(sites, top_k, rng)) {
      locs.push_back(lattice_site(idx, box.h()));
    }
  }

  const double remaining_shape = static_cast<double>(sites - top_k) + 1.0;
  const double gamma_total = partial.back() + rng.gamma(remaining_shape);

  Environment env;
  env.kind = EnvKind::LatticeField;
  env.box = box;
  env.alpha = alpha;
  env.seed = seed;
  env.method = "order-statistic";
  env.entries.reserve(top_k);
  for (std::size_t r = 0; r < top_k; ++r) {
    env.entries.push_back({std::pow(gamma_total / partial[r], 1.0 / alpha), locs[r]});
  }
  return env;
}

Environment ppp_from_draws(double alpha, double q, std::span<const double> exponentials,
                           std::span<const TimeSpacePoint> locations) {
  check_alpha(alpha);
  if (!(q > 0.0)) throw ContractViolation("ppp half-width q must be positive");
  if (exponentials.size() != locations.size() || exponentials.empty()) {
    throw ContractViolation("ppp_from_draws: need matching nonempty draw sequences");
  }
  Environment env;
  env.kind = EnvKind::Ppp;
  env.box = Box::continuous(1.0, q);
  env.alpha = alpha;
  env.method = "ordered-exponential-sums";
  const double scale = std::pow(2.0 * q, 1.0 / alpha);
  double acc = 0.0;
  for (std::size_t i = 0; i < exponentials.size(); ++i) {
    if (!(exponentials[i] > 0.0)) throw ContractViolation("exponential draws must be positive");
    acc += exponentials[i];
    env.entries.push_back({scale * std::pow(acc, -1.0 / alpha), locations[i]});
  }
  return env;
}

Environment sample_ppp_ordered(std::size_t ell, double alpha, double q, const SeedSpec& seed) {
  check_alpha(alpha);
  if (ell == 0) throw ContractViolation("sample_ppp_ordered: ell must be >= 1");
  if (!(q > 0.0) || !std::isfinite(q)) throw ContractViolation("q must be positive and finite");
  Rng rng = derive_stream(seed);
  std::vector<double> exps(ell);
  std::vector<TimeSpacePoint> locs(ell);
  for (std::size_t i = 0; i < ell; ++i) {
    exps[i] = rng.exponential();
    const double ut = rng.uniform();
    const double ux = rng.uniform();
    locs[i] = {ut, q * (2.0 * ux - 1.0)};
  }
  Environment env = ppp_from_draws(alpha, q, exps, locs);
  env.seed = seed;
  return env;
}

double m_of(double x, double alpha) {
  if (!(x >= 1.0)) throw ContractViolation("m_of: x must be >= 1");
  if (!(alpha > 0.0)) throw ContractViolation("m_of: alpha must be positive");
  return std::pow(x, 1.0 / alpha);
}

}  // namespace elpp
