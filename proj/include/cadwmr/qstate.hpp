#pragma once

// Two-qubit density matrices in the computational basis |00>,|01>,|10>,|11>.
// Entry (i, j) with 0-based indices corresponds to rho_{i+1, j+1}; so (3, 0)
// is the |11><00| coherence.

#include <array>
#include <complex>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace cadwmr {

using Complex = std::complex<double>;
using Matrix4c = Eigen::Matrix<Complex, 4, 4>;
using Vector4c = Eigen::Matrix<Complex, 4, 1>;
using Matrix2c = Eigen::Matrix<Complex, 2, 2>;

inline constexpr double kHermitianTol = 1e-12;

class DensityMatrix4 {
 public:
  /// |00><00|.
  DensityMatrix4();

  /// Takes a Hermitian matrix (within 1e-10 entrywise) and stores its exact
  /// Hermitian part. Throws ContractError on non-finite or non-Hermitian input.
  explicit DensityMatrix4(const Matrix4c& m);

  static DensityMatrix4 from_pure(const Vector4c& psi);
  static DensityMatrix4 basis(int index);

  const Matrix4c& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }
  double population(int i) const { return m_(i, i).real(); }
  double trace() const;

  /// Divides by the trace. Throws NumericalError when the trace is below 1e-14.
  DensityMatrix4 normalized() const;

 private:
  Matrix4c m_;
};

enum class FamilyKind { Bell, Werner, Mems, Nme };

/// One of the initial-state families, with its parameter in [0, 1]:
/// Werner purity r_b, MEMS gamma, or NME |alpha|^2. Bell ignores the parameter.
struct StateFamily {
  FamilyKind kind = FamilyKind::Bell;
  double parameter = 1.0;

  static StateFamily bell() { return {FamilyKind::Bell, 1.0}; }
  static StateFamily werner(double rb) { return {FamilyKind::Werner, rb}; }
  static StateFamily mems(double gamma) { return {FamilyKind::Mems, gamma}; }
  static StateFamily nme(double alpha2) { return {FamilyKind::Nme, alpha2}; }

  std::string name() const;
};

FamilyKind parse_family_kind(std::string_view name);
std::string_view family_kind_name(FamilyKind kind);

/// Eigenvalues sorted descending.
struct Spectrum {
  std::array<double, 4> values{};
  double sum() const { return values[0] + values[1] + values[2] + values[3]; }
};

DensityMatrix4 make_state(const StateFamily& family);

/// MEMS population g(gamma): 1/3 below gamma = 2/3, gamma/2 above.
double mems_g(double gamma);

/// Throws ContractError if m deviates from Hermitian by more than 1e-10.
Spectrum hermitian_eigenvalues(const Matrix4c& m);

/// Shannon entropy in bits of a probability-like vector; entries are clamped
/// to [0, 1] and 0 log 0 = 0.
double shannon_entropy_bits(std::span<const double> probabilities);

double von_neumann_entropy(const DensityMatrix4& rho);

struct PurityReport {
  double purity = 1.0;          // Tr rho^2
  double linear_entropy = 0.0;  // 4/3 (1 - Tr rho^2)
};

PurityReport purity_and_linear_entropy(const DensityMatrix4& rho);

/// True iff every entry outside the diagonal and the anti-diagonal has modulus <= tol.
bool is_x_state(const DensityMatrix4& rho, double tol);

/// Kronecker product of two 2x2 operators (first factor acts on the first qubit).
Matrix4c kron(const Matrix2c& a, const Matrix2c& b);

/// Entrywise max |a(i,j) - b(i,j)|.
double max_abs_diff(const Matrix4c& a, const Matrix4c& b);

}  // namespace cadwmr
