#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qlsp/linalg.hpp"

namespace qlsp {

enum class MatrixClass { kHermitianPd, kHermitianIndefinite, kGeneral };

std::string_view to_string(MatrixClass c);
MatrixClass parse_matrix_class(std::string_view text);

/// A x = b with ||A||_2 = 1 and unit-norm b.
struct QlspInstance {
  ComplexMatrix a;
  StateVector b;
  double kappa = 1.0;
  MatrixClass matrix_class = MatrixClass::kGeneral;

  Index n_dim() const { return a.rows(); }
};

enum class Family { kPdLaplacian, kNonhermitianLaplacian };

std::string_view to_string(Family f);   // "pd" / "nonh"
Family parse_family(std::string_view text);

struct GeneratorSpec {
  Index n_dim = 64;
  double kappa = 10.0;
  Family family = Family::kPdLaplacian;
};

/// Circulant tridiagonal matrix with `diagonal` on the diagonal and -0.5 on the
/// off-diagonals and periodic corners.
ComplexMatrix periodic_laplacian(Index n, double diagonal);

/// Eigenvalues evenly spaced on [1/kappa, 1]; entry k has sign (-1)^(k+1) when
/// `alternating` (k counted from 1).
RealVector spaced_spectrum(Index n, double kappa, bool alternating);

QlspInstance generate_pd(const GeneratorSpec& spec);
QlspInstance generate_nonhermitian(const GeneratorSpec& spec);
QlspInstance generate(const GeneratorSpec& spec);

struct LoadOptions {
  bool allow_rescale = false;
};

// Text format:
//   qlsp v1
//   N <n>
//   class <hermitian_pd|hermitian_indefinite|general>
//   [kappa <declared>]           optional, accepted on read only
//   n rows of 2n decimals (re im pairs) for A
//   one row of 2n decimals for b
void write_instance(std::ostream& out, const QlspInstance& inst);
void save_instance(const QlspInstance& inst, const std::filesystem::path& path);

QlspInstance read_instance(std::istream& in, const LoadOptions& options = {},
                           std::vector<std::string>* warnings = nullptr);
QlspInstance load_instance(const std::filesystem::path& path, const LoadOptions& options = {},
                           std::vector<std::string>* warnings = nullptr);

}  // namespace qlsp
