#include "wigner/ensemble.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "wigner/error.hpp"
#include "wigner/metropolis.hpp"
#include "wigner/parallel.hpp"

namespace wigner {

HermitianMatrix HermitianMatrix::from_upper(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::invalid_argument, "matrix is not square");
  HermitianMatrix h(static_cast<int>(m.rows()));
  for (int i = 0; i < h.dimension(); ++i) {
    h.m_(i, i) = {m(i, i).real(), 0.0};
    for (int j = i + 1; j < h.dimension(); ++j) {
      h.m_(i, j) = m(i, j);
      h.m_(j, i) = std::conj(m(i, j));
    }
  }
  return h;
}

void HermitianMatrix::set(int i, int j, std::complex<double> value) {
  if (i == j) {
    m_(i, i) = {value.real(), 0.0};
    return;
  }
  m_(i, j) = value;
  m_(j, i) = std::conj(value);
}

bool HermitianMatrix::is_exactly_hermitian() const {
  const int n = dimension();
  for (int i = 0; i < n; ++i) {
    if (m_(i, i).imag() != 0.0) return false;
    for (int j = i + 1; j < n; ++j) {
      if (m_(j, i) != std::conj(m_(i, j))) return false;
    }
  }
  return true;
}

namespace {

void check_distribution(const ScalarDistribution& d, const char* what) {
  if (!(d.param > 0.0) || !std::isfinite(d.param) || !std::isfinite(d.mean)) {
    throw Error(ErrorCode::invalid_spec, std::string(what) + " distribution needs a finite positive parameter");
  }
}

void fill_gue(HermitianMatrix& m, double alpha, std::mt19937_64& rng) {
  const int n = m.dimension();
  std::normal_distribution<double> diag(0.0, alpha);
  std::normal_distribution<double> part(0.0, alpha / std::sqrt(2.0));
  for (int i = 0; i < n; ++i) {
    m.set(i, i, diag(rng));
    for (int j = i + 1; j < n; ++j) {
      const double re = part(rng);
      const double im = part(rng);
      m.set(i, j, {re, im});
    }
  }
}

HermitianMatrix sample_direct(const EnsembleSpec& spec, int n, std::mt19937_64& rng) {
  HermitianMatrix m(n);
  if (const auto* gue = std::get_if<GueSpec>(&spec)) {
    if (gue->alpha > 0.0) fill_gue(m, gue->alpha, rng);
  } else if (const auto* w = std::get_if<WignerIidSpec>(&spec)) {
    for (int i = 0; i < n; ++i) {
      m.set(i, i, w->diagonal.sample(rng));
      for (int j = i + 1; j < n; ++j) {
        const double re = w->offdiag.sample(rng);
        const double im = w->offdiag.sample(rng);
        m.set(i, j, {re, im});
      }
    }
  } else if (const auto* c = std::get_if<CommonNoiseSpec>(&spec)) {
    if (c->alpha > 0.0) fill_gue(m, c->alpha, rng);
    const double s = c->noise.sample(rng) * std::pow(static_cast<double>(n), -c->beta);
    if (s != 0.0) {
      const bool diagonal = c->pattern == SupportPattern::all_ones;
      Eigen::MatrixXcd shifted = m.dense();
      for (int i = 0; i < n; ++i) {
        for (int j = diagonal ? i : i + 1; j < n; ++j) shifted(i, j) += s;
      }
      m = HermitianMatrix::from_upper(shifted);
    }
  }
  return m;
}

void write_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((v >> (8 * b)) & 0xffu);
  os.write(bytes.data(), 8);
}

std::uint64_t read_u64(std::istream& is) {
  std::array<unsigned char, 8> bytes{};
  is.read(reinterpret_cast<char*>(bytes.data()), 8);
  if (!is) throw Error(ErrorCode::io_failure, "truncated matrix stream");
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
  return v;
}

// Joint cumulant of p factors M_ij and q factors M_ji (i != j) when the real
// and imaginary parts are iid with cumulant kappa.
ComplexRational offdiagonal_cumulant(const Rational& kappa, int p, int q) {
  const int e = p + q;
  // i^e (-1)^q
  const int quarter = e % 4;
  Rational re = kappa;
  Rational im = 0;
  const int sign = (q % 2 == 0) ? 1 : -1;
  switch (quarter) {
    case 0: re += sign * kappa; break;
    case 1: im = sign * kappa; break;
    case 2: re -= sign * kappa; break;
    case 3: im = -sign * kappa; break;
  }
  return {re, im};
}

}  // namespace

void validate(const EnsembleSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GueSpec>) {
          if (!(s.alpha >= 0.0) || !std::isfinite(s.alpha)) throw Error(ErrorCode::invalid_spec, "alpha must be >= 0");
        } else if constexpr (std::is_same_v<T, WignerIidSpec>) {
          check_distribution(s.diagonal, "diagonal");
          check_distribution(s.offdiag, "off-diagonal");
          if (s.offdiag.mean != 0.0) throw Error(ErrorCode::invalid_spec, "off-diagonal distribution must be centered");
        } else if constexpr (std::is_same_v<T, CommonNoiseSpec>) {
          if (!(s.alpha >= 0.0) || !std::isfinite(s.alpha)) throw Error(ErrorCode::invalid_spec, "alpha must be >= 0");
          check_distribution(s.noise, "noise");
          if (!(s.beta >= 0.0)) throw Error(ErrorCode::invalid_spec, "beta must be >= 0");
        } else {
          for (const auto& [p, g] : s.couplings) {
            if (p < 3) throw Error(ErrorCode::invalid_spec, "couplings start at p = 3");
            if (!std::isfinite(g)) throw Error(ErrorCode::invalid_spec, "coupling is not finite");
          }
          if (s.steps < 1 || s.burn_in < 0 || !(s.step_size > 0.0)) {
            throw Error(ErrorCode::invalid_spec, "steps >= 1, burn_in >= 0 and step_size > 0 required");
          }
        }
      },
      spec);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t n, std::uint64_t sample_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n >> 32),
                    static_cast<std::uint32_t>(sample_index), static_cast<std::uint32_t>(sample_index >> 32)};
  return std::mt19937_64(seq);
}

HermitianMatrix sample(const EnsembleSpec& spec, int n, std::uint64_t seed, std::uint64_t sample_index) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "N must be >= 1");
  validate(spec);
  auto rng = make_stream(seed, static_cast<std::uint64_t>(n), sample_index);
  if (const auto* pot = std::get_if<InvariantPotentialSpec>(&spec)) {
    MetropolisChain chain(*pot, n, rng);
    chain.run_burn_in();
    return chain.state();
  }
  return sample_direct(spec, n, rng);
}

std::vector<HermitianMatrix> sample_batch(const EnsembleSpec& spec, int n, std::uint64_t seed, int count,
                                          int workers) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "N must be >= 1");
  if (count < 0) throw Error(ErrorCode::invalid_argument, "negative sample count");
  validate(spec);
  std::vector<HermitianMatrix> out(count, HermitianMatrix(n));
  if (const auto* pot = std::get_if<InvariantPotentialSpec>(&spec)) {
    MetropolisChain chain(*pot, n, make_stream(seed, static_cast<std::uint64_t>(n), 0));
    chain.run_burn_in();
    for (int s = 0; s < count; ++s) out[s] = chain.next_sample();
    return out;
  }
  parallel_for(count, workers, [&](int s) {
    auto rng = make_stream(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(s));
    out[s] = sample_direct(spec, n, rng);
  });
  return out;
}

CumulantSpec cumulant_spec_of(const EnsembleSpec& spec, int max_order) {
  validate(spec);
  if (const auto* gue = std::get_if<GueSpec>(&spec)) {
    const Rational a = rational_from_double(gue->alpha);
    return CumulantSpec::with_alpha_squared(a * a);
  }
  if (const auto* c = std::get_if<CommonNoiseSpec>(&spec)) {
    const Rational a = rational_from_double(c->alpha);
    const auto kappa = c->noise.cumulants(max_order);
    std::vector<PatternPerturbation> patterns;
    for (int e = 1; e <= max_order; ++e) {
      if (kappa[e - 1] == 0) continue;
      patterns.push_back({e, c->pattern, ComplexRational(kappa[e - 1]), e * c->beta});
    }
    return CumulantSpec::with_alpha_squared(a * a, {}, std::move(patterns));
  }
  if (const auto* w = std::get_if<WignerIidSpec>(&spec)) {
    if (!w->offdiag.symmetric()) {
      // Odd cumulants of M_ij then depend on whether i < j: not index-uniform.
      throw Error(ErrorCode::unsupported, "off-diagonal distribution must be symmetric");
    }
    const auto off = w->offdiag.cumulants(max_order);
    const auto diag = w->diagonal.cumulants(max_order);
    const Rational alpha_squared = 2 * off[1];
    std::vector<PerturbationTerm> terms;
    for (int e = 1; e <= max_order; ++e) {
      Rational loop = diag[e - 1];
      if (e == 2) loop -= alpha_squared;
      if (loop != 0) {
        std::vector<Edge> edges(e, Edge{0, 0});
        terms.push_back({canonical_key(OrientedMultigraph(1, edges)), ComplexRational(loop), 0.0});
      }
      if (e == 2 || off[e - 1] == 0) continue;
      // p edges 0 -> 1 and q edges 1 -> 0; (p, q) and (q, p) are isomorphic.
      for (int q = 0; 2 * q <= e; ++q) {
        const int p = e - q;
        const ComplexRational amp = offdiagonal_cumulant(off[e - 1], p, q);
        if (amp.is_zero()) continue;
        std::vector<Edge> edges;
        for (int k = 0; k < p; ++k) edges.push_back({0, 1});
        for (int k = 0; k < q; ++k) edges.push_back({1, 0});
        terms.push_back({canonical_key(OrientedMultigraph(2, edges)), amp, 0.0});
      }
    }
    return CumulantSpec::with_alpha_squared(alpha_squared, std::move(terms));
  }
  throw Error(ErrorCode::unsupported, "invariant potentials have no closed-form cumulants");
}

nlohmann::json to_json(const EnsembleSpec& spec) {
  return std::visit(
      [](const auto& s) -> nlohmann::json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GueSpec>) {
          return {{"type", "gue"}, {"alpha", s.alpha}};
        } else if constexpr (std::is_same_v<T, WignerIidSpec>) {
          return {{"type", "wigner_iid"}, {"diagonal", to_json(s.diagonal)}, {"offdiag", to_json(s.offdiag)}};
        } else if constexpr (std::is_same_v<T, CommonNoiseSpec>) {
          return {{"type", "common_noise"},
                  {"alpha", s.alpha},
                  {"noise", to_json(s.noise)},
                  {"beta", s.beta},
                  {"pattern", to_string(s.pattern)}};
        } else {
          nlohmann::json couplings = nlohmann::json::object();
          for (const auto& [p, g] : s.couplings) couplings[std::to_string(p)] = g;
          return {{"type", "invariant_potential"},
                  {"couplings", couplings},
                  {"steps", s.steps},
                  {"step_size", s.step_size},
                  {"burn_in", s.burn_in}};
        }
      },
      spec);
}

EnsembleSpec ensemble_from_json(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    EnsembleSpec spec;
    if (type == "gue") {
      spec = GueSpec{j.value("alpha", 1.0)};
    } else if (type == "wigner_iid") {
      spec = WignerIidSpec{distribution_from_json(j.at("diagonal")), distribution_from_json(j.at("offdiag"))};
    } else if (type == "common_noise") {
      CommonNoiseSpec c;
      c.alpha = j.value("alpha", 1.0);
      if (j.contains("noise")) c.noise = distribution_from_json(j.at("noise"));
      c.beta = j.value("beta", 0.5);
      if (j.contains("pattern")) c.pattern = support_pattern_from_string(j.at("pattern").get<std::string>());
      spec = c;
    } else if (type == "invariant_potential") {
      InvariantPotentialSpec p;
      if (j.contains("couplings")) {
        for (const auto& [key, value] : j.at("couplings").items()) p.couplings[std::stoi(key)] = value.get<double>();
      }
      p.steps = j.value("steps", p.steps);
      p.step_size = j.value("step_size", p.step_size);
      p.burn_in = j.value("burn_in", p.burn_in);
      spec = p;
    } else {
      throw Error(ErrorCode::invalid_spec, "unknown ensemble type '" + type + "'");
    }
    validate(spec);
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_spec, e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::invalid_spec, e.what());
  }
}

void write_matrix_binary(std::ostream& os, const HermitianMatrix& m) {
  const int n = m.dimension();
  write_u64(os, static_cast<std::uint64_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      write_u64(os, std::bit_cast<std::uint64_t>(m(i, j).real()));
      write_u64(os, std::bit_cast<std::uint64_t>(m(i, j).imag()));
    }
  }
  if (!os) throw Error(ErrorCode::io_failure, "failed to write matrix");
}

HermitianMatrix read_matrix_binary(std::istream& is) {
  const std::uint64_t n = read_u64(is);
  if (n == 0 || n > (1u << 16)) throw Error(ErrorCode::io_failure, "implausible matrix dimension");
  Eigen::MatrixXcd dense(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    for (Eigen::Index j = 0; j < dense.cols(); ++j) {
      const double re = std::bit_cast<double>(read_u64(is));
      const double im = std::bit_cast<double>(read_u64(is));
      dense(i, j) = {re, im};
    }
  }
  HermitianMatrix m = HermitianMatrix::from_upper(dense);
  if (m.dense() != dense) throw Error(ErrorCode::io_failure, "stored matrix is not Hermitian");
  return m;
}

}  // namespace wigner
