#pragma once

#include <span>
#include <string>
#include <string_view>

#include "rotor/operators.hpp"
#include "rotor/params.hpp"
#include "rotor/state.hpp"

namespace rotor {

enum class GeneratorMode {
  full,                  // kinetic + potential + all three dissipator lines
  unitary_only,          // kinetic + potential
  diffusion_only,        // kinetic + potential + momentum diffusion with Gamma = 0
  no_angular_diffusion,  // full without the hbar^2-suppressed angular-diffusion line
};

enum class Representation { matrix, aux_wigner };

std::string_view to_string(GeneratorMode mode);
std::string_view to_string(Representation representation);
GeneratorMode parse_mode(std::string_view text);
Representation parse_representation(std::string_view text);

struct GeneratorSpec {
  BathParams bath;
  PotentialSpec potential;
  GeneratorMode mode = GeneratorMode::full;
  Representation representation = Representation::aux_wigner;
  /// Momentum-diffusion constant used by diffusion_only, independent of the
  /// bath temperature.
  double frictionless_diffusion = 0.0;

  /// Effective coefficients of the three dissipator lines for this mode.
  double momentum_diffusion() const;
  double friction() const;
  double angular_diffusion() const;  // hbar^2 Gamma / (16 T I)

  static GeneratorSpec frictionless(double diffusion, PotentialSpec potential = {}, double hbar = 1.0,
                                    double inertia = 1.0);
};

/// Phase-space generator terms acting on the Fourier coefficients of the
/// auxiliary Wigner functions.
AuxWignerField apply_kinetic(const AuxWignerField& field, const BathParams& bath);
AuxWignerField apply_potential(const AuxWignerField& field, const PotentialSpec& potential, double hbar);
AuxWignerField apply_dissipator(const AuxWignerField& field, const GeneratorSpec& spec);

/// Same terms on the density matrix, assembled from the shift operators.
DensityMatrix kinetic_matrix(const DensityMatrix& rho, const BathParams& bath);
DensityMatrix potential_commutator_matrix(const DensityMatrix& rho, const PotentialSpec& potential, double hbar);
DensityMatrix dissipator_matrix(const DensityMatrix& rho, const GeneratorSpec& spec);

/// Frobenius norm of the coefficients within `width` of the basis edge,
/// i.e. the part of the state whose flow the truncation discards.
double boundary_shell_norm(const AuxWignerField& field, int width);

/// Linear map rho -> d rho/dt in one representation. The flat layout is the
/// column-major matrix for `matrix` and AuxWignerField::data() for
/// `aux_wigner`.
class Generator {
 public:
  Generator(GeneratorSpec spec, int truncation);

  const GeneratorSpec& spec() const { return spec_; }
  Representation representation() const { return spec_.representation; }
  int truncation() const { return truncation_; }
  std::size_t state_size() const;

  void apply(std::span<const cplx> state, std::span<cplx> derivative) const;

  DensityMatrix operator()(const DensityMatrix& rho) const;
  AuxWignerField operator()(const AuxWignerField& field) const;

  /// The generator as a sparse matrix on the flat layout.
  SparseMatrix assemble() const;

  std::vector<cplx> flatten(const DensityMatrix& rho) const;
  DensityMatrix unflatten(std::span<const cplx> state) const;

 private:
  void apply_matrix(std::span<const cplx> state, std::span<cplx> derivative) const;

  GeneratorSpec spec_;
  int truncation_;
  // matrix representation
  ShiftOperators ops_;
  SparseMatrix cos1_, sin1_, potential_;
  // aux representation
  AuxWignerField layout_;
};

Generator total_generator(const GeneratorSpec& spec, int truncation);

}  // namespace rotor
