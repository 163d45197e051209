#include "rotor/liouvillian.hpp"

#include <cmath>
#include <string>

#include "rotor/errors.hpp"

namespace rotor {

std::string_view to_string(GeneratorMode mode) {
  switch (mode) {
    case GeneratorMode::full: return "full";
    case GeneratorMode::unitary_only: return "unitary_only";
    case GeneratorMode::diffusion_only: return "diffusion_only";
    case GeneratorMode::no_angular_diffusion: return "no_angular_diffusion";
  }
  return "?";
}

std::string_view to_string(Representation representation) {
  return representation == Representation::matrix ? "matrix" : "aux_wigner";
}

GeneratorMode parse_mode(std::string_view text) {
  if (text == "full") return GeneratorMode::full;
  if (text == "unitary_only") return GeneratorMode::unitary_only;
  if (text == "diffusion_only") return GeneratorMode::diffusion_only;
  if (text == "no_angular_diffusion") return GeneratorMode::no_angular_diffusion;
  throw ConfigError("unknown generator mode '" + std::string(text) + "'");
}

Representation parse_representation(std::string_view text) {
  if (text == "matrix") return Representation::matrix;
  if (text == "aux_wigner") return Representation::aux_wigner;
  throw ConfigError("unknown representation '" + std::string(text) + "'");
}

double GeneratorSpec::momentum_diffusion() const {
  switch (mode) {
    case GeneratorMode::unitary_only: return 0.0;
    case GeneratorMode::diffusion_only: return frictionless_diffusion;
    default: return bath.diffusion();
  }
}

double GeneratorSpec::friction() const {
  return (mode == GeneratorMode::full || mode == GeneratorMode::no_angular_diffusion) ? bath.gamma() : 0.0;
}

double GeneratorSpec::angular_diffusion() const {
  if (mode != GeneratorMode::full) return 0.0;
  return bath.hbar() * bath.hbar() * bath.gamma() / (16.0 * bath.temperature() * bath.inertia());
}

GeneratorSpec GeneratorSpec::frictionless(double diffusion, PotentialSpec potential, double hbar, double inertia) {
  GeneratorSpec spec;
  spec.bath = BathParams(1.0, 0.0, hbar, inertia);
  spec.potential = std::move(potential);
  spec.mode = GeneratorMode::diffusion_only;
  spec.frictionless_diffusion = diffusion;
  return spec;
}

// ---------------------------------------------------------------------------
// Auxiliary-Wigner form. Every term is a stencil on the (n = 2 nu, k) lattice.

namespace {

template <class F>
void for_each_coeff(const AuxWignerField& layout, F&& f) {
  const int M = layout.truncation();
  std::size_t idx = 0;
  for (int n = -2 * M; n <= 2 * M; ++n) {
    const int kmax = layout.max_harmonic(n);
    for (int k = -kmax; k <= kmax; k += 2) f(n, k, idx++);
  }
}

// Each term is emitted as (output index, input index, weight); sources
// outside the truncation are skipped, i.e. treated as zero.

// -(nu hbar / I) d/dalpha
template <class Emit>
void kinetic_terms(const AuxWignerField& layout, double hbar, double inertia, Emit&& emit) {
  const double rate = hbar / inertia;
  for_each_coeff(layout, [&](int n, int k, std::size_t idx) {
    if (n != 0 && k != 0) emit(idx, idx, cplx(0.0, -0.5 * n * k * rate));
  });
}

// (1/hbar) sum_h [a_h sin h alpha - b_h cos h alpha] [W_{nu-h/2} - W_{nu+h/2}]
template <class Emit>
void potential_terms(const AuxWignerField& layout, const PotentialSpec& potential, double hbar, Emit&& emit) {
  for (const auto& term : potential.terms()) {
    const int h = term.k;
    const cplx up = cplx(-0.5 * term.b, -0.5 * term.a) / hbar;    // e^{+i h alpha}
    const cplx down = cplx(-0.5 * term.b, 0.5 * term.a) / hbar;   // e^{-i h alpha}
    for_each_coeff(layout, [&](int n, int k, std::size_t idx) {
      auto source = [&](int sn, int sk, cplx w) {
        if (layout.contains(sn, sk)) emit(idx, layout.flat_index(sn, sk), w);
      };
      source(n - h, k - h, up);
      source(n + h, k - h, -up);
      source(n - h, k + h, down);
      source(n + h, k + h, -down);
    });
  }
}

template <class Emit>
void dissipator_terms(const AuxWignerField& layout, const GeneratorSpec& spec, Emit&& emit) {
  const double hbar = spec.bath.hbar();
  const double diffusion = spec.momentum_diffusion() / (hbar * hbar);
  const double friction = 0.5 * spec.friction();
  const double angular = spec.angular_diffusion();
  if (diffusion == 0.0 && friction == 0.0 && angular == 0.0) return;
  for_each_coeff(layout, [&](int n, int k, std::size_t idx) {
    const double nu = 0.5 * n;
    const double k2 = 0.25 * k * k;
    const double above = diffusion + friction * (nu + 1.0) + angular * ((nu + 1.0) * (nu + 1.0) - k2);
    const double below = diffusion - friction * (nu - 1.0) + angular * ((nu - 1.0) * (nu - 1.0) - k2);
    const double here = -2.0 * diffusion - 2.0 * angular * (nu * nu + k2);
    if (layout.contains(n + 2, k)) emit(idx, layout.flat_index(n + 2, k), cplx(above));
    if (layout.contains(n - 2, k)) emit(idx, layout.flat_index(n - 2, k), cplx(below));
    if (here != 0.0) emit(idx, idx, cplx(here));
  });
}

struct Accumulate {
  std::span<const cplx> in;
  std::span<cplx> out;
  void operator()(std::size_t o, std::size_t i, cplx w) const { out[o] += w * in[i]; }
};

// ---------------------------------------------------------------------------
// Matrix form, written term by term in e_r = (cos, sin), e_phi = (-sin, cos).

Matrix kinetic_impl(const Matrix& rho, int M, const BathParams& bath) {
  const double scale = bath.hbar() / (2.0 * bath.inertia());
  Matrix out(rho.rows(), rho.cols());
  for (int j = 0; j < rho.cols(); ++j) {
    const double mj = j - M;
    for (int i = 0; i < rho.rows(); ++i) {
      const double mi = i - M;
      out(i, j) = cplx(0.0, -scale * (mi * mi - mj * mj)) * rho(i, j);
    }
  }
  return out;
}

Matrix commutator_impl(const Matrix& rho, const SparseMatrix& v, double hbar) {
  Matrix out = v * rho;
  out -= rho * v;
  return cplx(0.0, -1.0 / hbar) * out;
}

Matrix dissipator_impl(const Matrix& rho, const ShiftOperators& ops, const SparseMatrix& c, const SparseMatrix& s,
                       const GeneratorSpec& spec) {
  const double hbar = spec.bath.hbar();
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  const double diffusion = spec.momentum_diffusion();
  if (diffusion != 0.0) {
    // (2D/hbar^2) [e_r . rho e_r - rho]
    Matrix er_rho_er = c * rho * c;
    er_rho_er += s * rho * s;
    out += (2.0 * diffusion / (hbar * hbar)) * (er_rho_er - rho);
  }
  const double gamma = spec.friction();
  if (gamma != 0.0) {
    // (i Gamma / 2 hbar) [e_phi . p rho e_r - e_r . rho p e_phi]
    const Matrix p_rho = ops.momentum * rho;
    const Matrix rho_p = rho * ops.momentum;
    Matrix term = -(s * p_rho * c);
    term += c * p_rho * s;
    term -= -(c * rho_p * s);
    term -= s * rho_p * c;
    out += cplx(0.0, gamma / (2.0 * hbar)) * term;
  }
  const double angular = spec.angular_diffusion();
  if (angular != 0.0) {
    // D/(8 T^2 I^2) [e_phi p . rho p e_phi - {p^2, rho}/2] with D/(8 T^2 I^2) = 2 angular / hbar^2
    const Matrix p_rho_p = ops.momentum * rho * ops.momentum;
    Matrix ephi = s * p_rho_p * s;
    ephi += c * p_rho_p * c;
    const SparseMatrix p2 = ops.momentum * ops.momentum;
    Matrix anti = p2 * rho;
    anti += rho * p2;
    out += (2.0 * angular / (hbar * hbar)) * (ephi - 0.5 * anti);
  }
  return out;
}

}  // namespace

AuxWignerField apply_kinetic(const AuxWignerField& field, const BathParams& bath) {
  AuxWignerField out(field.truncation());
  kinetic_terms(field, bath.hbar(), bath.inertia(), Accumulate{field.data(), out.data()});
  return out;
}

AuxWignerField apply_potential(const AuxWignerField& field, const PotentialSpec& potential, double hbar) {
  AuxWignerField out(field.truncation());
  potential_terms(field, potential, hbar, Accumulate{field.data(), out.data()});
  return out;
}

AuxWignerField apply_dissipator(const AuxWignerField& field, const GeneratorSpec& spec) {
  AuxWignerField out(field.truncation());
  dissipator_terms(field, spec, Accumulate{field.data(), out.data()});
  return out;
}

DensityMatrix kinetic_matrix(const DensityMatrix& rho, const BathParams& bath) {
  return DensityMatrix(rho.truncation(), kinetic_impl(rho.matrix(), rho.truncation(), bath));
}

DensityMatrix potential_commutator_matrix(const DensityMatrix& rho, const PotentialSpec& potential, double hbar) {
  return DensityMatrix(rho.truncation(),
                       commutator_impl(rho.matrix(), potential_matrix(potential, rho.truncation()), hbar));
}

DensityMatrix dissipator_matrix(const DensityMatrix& rho, const GeneratorSpec& spec) {
  const ShiftOperators ops(rho.truncation(), spec.bath.hbar());
  return DensityMatrix(rho.truncation(), dissipator_impl(rho.matrix(), ops, ops.cos_k(1), ops.sin_k(1), spec));
}

double boundary_shell_norm(const AuxWignerField& field, int width) {
  const int M = field.truncation();
  double sum = 0.0;
  for_each_coeff(field, [&](int n, int k, std::size_t idx) {
    const int m1 = (n + k) / 2;
    const int m2 = (n - k) / 2;
    if (std::abs(m1) > M - width || std::abs(m2) > M - width) sum += std::norm(field.data()[idx]);
  });
  return std::sqrt(sum);
}

// ---------------------------------------------------------------------------

Generator::Generator(GeneratorSpec spec, int truncation)
    : spec_(std::move(spec)), truncation_(truncation), ops_(truncation, spec_.bath.hbar()) {
  if (spec_.representation == Representation::matrix) {
    cos1_ = ops_.cos_k(1);
    sin1_ = ops_.sin_k(1);
    potential_ = potential_matrix(spec_.potential, truncation_);
  } else {
    layout_ = AuxWignerField(truncation_);
  }
}

std::size_t Generator::state_size() const {
  const std::size_t n = 2 * truncation_ + 1;
  return n * n;
}

void Generator::apply_matrix(std::span<const cplx> state, std::span<cplx> derivative) const {
  const int n = 2 * truncation_ + 1;
  const Eigen::Map<const Matrix> rho(state.data(), n, n);
  Eigen::Map<Matrix> out(derivative.data(), n, n);
  out = kinetic_impl(rho, truncation_, spec_.bath);
  if (!spec_.potential.empty()) out += commutator_impl(rho, potential_, spec_.bath.hbar());
  if (spec_.mode != GeneratorMode::unitary_only) out += dissipator_impl(rho, ops_, cos1_, sin1_, spec_);
}

void Generator::apply(std::span<const cplx> state, std::span<cplx> derivative) const {
  if (state.size() != state_size() || derivative.size() != state_size()) {
    throw std::invalid_argument("Generator::apply: state size mismatch");
  }
  if (spec_.representation == Representation::matrix) {
    apply_matrix(state, derivative);
    return;
  }
  std::fill(derivative.begin(), derivative.end(), cplx{});
  const Accumulate sink{state, derivative};
  kinetic_terms(layout_, spec_.bath.hbar(), spec_.bath.inertia(), sink);
  potential_terms(layout_, spec_.potential, spec_.bath.hbar(), sink);
  dissipator_terms(layout_, spec_, sink);
}

SparseMatrix Generator::assemble() const {
  const auto n = static_cast<Eigen::Index>(state_size());
  SparseMatrix out(n, n);
  std::vector<Eigen::Triplet<cplx>> triplets;
  if (spec_.representation == Representation::aux_wigner) {
    auto sink = [&](std::size_t o, std::size_t i, cplx w) { triplets.emplace_back(o, i, w); };
    kinetic_terms(layout_, spec_.bath.hbar(), spec_.bath.inertia(), sink);
    potential_terms(layout_, spec_.potential, spec_.bath.hbar(), sink);
    dissipator_terms(layout_, spec_, sink);
  } else {
    // column probing; the matrix form has no stencil of its own
    std::vector<cplx> e(state_size()), col(state_size());
    for (Eigen::Index j = 0; j < n; ++j) {
      e[j] = 1.0;
      apply(e, col);
      e[j] = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        if (col[i] != cplx{}) triplets.emplace_back(i, j, col[i]);
    }
  }
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

DensityMatrix Generator::operator()(const DensityMatrix& rho) const {
  if (spec_.representation != Representation::matrix) {
    throw RepresentationError("matrix state passed to an aux_wigner generator");
  }
  if (rho.truncation() != truncation_) throw std::invalid_argument("Generator: truncation mismatch");
  std::vector<cplx> out(state_size());
  apply(std::span<const cplx>(rho.matrix().data(), state_size()), out);
  return DensityMatrix(truncation_, Eigen::Map<const Matrix>(out.data(), rho.dim(), rho.dim()));
}

AuxWignerField Generator::operator()(const AuxWignerField& field) const {
  if (spec_.representation != Representation::aux_wigner) {
    throw RepresentationError("aux_wigner state passed to a matrix generator");
  }
  if (field.truncation() != truncation_) throw std::invalid_argument("Generator: truncation mismatch");
  AuxWignerField out(truncation_);
  apply(field.data(), out.data());
  return out;
}

std::vector<cplx> Generator::flatten(const DensityMatrix& rho) const {
  if (spec_.representation == Representation::matrix) {
    return std::vector<cplx>(rho.matrix().data(), rho.matrix().data() + state_size());
  }
  return to_aux(rho).data();
}

DensityMatrix Generator::unflatten(std::span<const cplx> state) const {
  const int n = 2 * truncation_ + 1;
  if (spec_.representation == Representation::matrix) {
    return DensityMatrix(truncation_, Eigen::Map<const Matrix>(state.data(), n, n));
  }
  AuxWignerField field(truncation_);
  std::copy(state.begin(), state.end(), field.data().begin());
  return from_aux(field);
}

Generator total_generator(const GeneratorSpec& spec, int truncation) { return Generator(spec, truncation); }

}  // namespace rotor
