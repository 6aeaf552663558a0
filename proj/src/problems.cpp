#include "qlsp/problems.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "qlsp/error.hpp"

namespace qlsp {

namespace {

constexpr double kNormTol = 1e-6;
constexpr double kKappaTol = 1e-6;
constexpr double kSingularTol = 1e-13;

void validate(const GeneratorSpec& spec, Family expected) {
  if (spec.family != expected) {
    throw Error(ErrorCode::kInvalidSpec, "generator called with family " + std::string(to_string(spec.family)));
  }
  if (spec.n_dim < 2) throw Error(ErrorCode::kInvalidSpec, "N must be >= 2");
  if (!(spec.kappa > 1.0) || !std::isfinite(spec.kappa)) {
    throw Error(ErrorCode::kInvalidSpec, "kappa must be finite and > 1");
  }
}

StateVector column_sum_rhs(const ComplexMatrix& u) {
  StateVector b = u.rowwise().sum();
  return b / b.norm();
}

std::string format_decimal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

std::vector<double> parse_numbers(const std::string& line, std::size_t expected, const char* what) {
  std::istringstream ss(line);
  std::vector<double> values;
  std::string token;
  while (ss >> token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParseError, std::string(what) + ": bad number '" + token + "'");
    }
    if (used != token.size()) {
      throw Error(ErrorCode::kParseError, std::string(what) + ": bad number '" + token + "'");
    }
    values.push_back(v);
  }
  if (values.size() != expected) {
    throw Error(ErrorCode::kParseError, std::string(what) + ": expected " + std::to_string(expected) +
                                            " values, got " + std::to_string(values.size()));
  }
  return values;
}

std::pair<std::string, std::string> split_keyword(const std::string& line) {
  std::istringstream ss(line);
  std::string key, value, extra;
  ss >> key >> value;
  if (ss >> extra) return {key, ""};
  return {key, value};
}

void check_class(const QlspInstance& inst) {
  if (inst.matrix_class == MatrixClass::kGeneral) return;
  if (!is_hermitian(inst.a, 1e-10)) {
    throw Error(ErrorCode::kParseError,
                "class " + std::string(to_string(inst.matrix_class)) + " declared for a non-Hermitian matrix");
  }
  if (inst.matrix_class == MatrixClass::kHermitianPd) {
    const ComplexMatrix h = hermitian_part(inst.a);
    const double smallest = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (smallest <= 0.0) {
      throw Error(ErrorCode::kParseError, "class hermitian_pd declared for a matrix with eigenvalue " +
                                              format_decimal(smallest));
    }
  }
}

}  // namespace

std::string_view to_string(MatrixClass c) {
  switch (c) {
    case MatrixClass::kHermitianPd: return "hermitian_pd";
    case MatrixClass::kHermitianIndefinite: return "hermitian_indefinite";
    case MatrixClass::kGeneral: return "general";
  }
  return "general";
}

MatrixClass parse_matrix_class(std::string_view text) {
  if (text == "hermitian_pd") return MatrixClass::kHermitianPd;
  if (text == "hermitian_indefinite") return MatrixClass::kHermitianIndefinite;
  if (text == "general") return MatrixClass::kGeneral;
  throw Error(ErrorCode::kParseError, "unknown matrix class '" + std::string(text) + "'");
}

std::string_view to_string(Family f) {
  return f == Family::kPdLaplacian ? "pd" : "nonh";
}

Family parse_family(std::string_view text) {
  if (text == "pd" || text == "pd_laplacian") return Family::kPdLaplacian;
  if (text == "nonh" || text == "nonhermitian_laplacian") return Family::kNonhermitianLaplacian;
  throw Error(ErrorCode::kInvalidSpec, "unknown family '" + std::string(text) + "'");
}

ComplexMatrix periodic_laplacian(Index n, double diagonal) {
  ComplexMatrix l = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    l(i, i) = diagonal;
    l(i, (i + 1) % n) += -0.5;
    l((i + 1) % n, i) += -0.5;
  }
  return l;
}

RealVector spaced_spectrum(Index n, double kappa, bool alternating) {
  RealVector lambda(n);
  const double h = (1.0 - 1.0 / kappa) / static_cast<double>(n - 1);
  for (Index k = 0; k < n; ++k) {
    // k is zero-based here; the sign (-1)^(k+1) matches one-based (-1)^k.
    const double magnitude = 1.0 / kappa + static_cast<double>(k) * h;
    lambda(k) = (alternating && k % 2 == 0) ? -magnitude : magnitude;
  }
  lambda(n - 1) = alternating && (n - 1) % 2 == 0 ? -1.0 : 1.0;
  return lambda;
}

QlspInstance generate_pd(const GeneratorSpec& spec) {
  validate(spec, Family::kPdLaplacian);
  const Index n = spec.n_dim;
  const ComplexMatrix u = qr_orthonormalize(periodic_laplacian(n, 1.0), RankPolicy::kComplete);
  const RealVector lambda = spaced_spectrum(n, spec.kappa, false);
  ComplexMatrix a = u * lambda.cast<Complex>().asDiagonal() * u.adjoint();
  return {hermitian_part(a), column_sum_rhs(u), spec.kappa, MatrixClass::kHermitianPd};
}

QlspInstance generate_nonhermitian(const GeneratorSpec& spec) {
  validate(spec, Family::kNonhermitianLaplacian);
  const Index n = spec.n_dim;
  const ComplexMatrix u = qr_orthonormalize(periodic_laplacian(n, 1.0), RankPolicy::kComplete);
  const ComplexMatrix v = qr_orthonormalize(periodic_laplacian(n, 2.0), RankPolicy::kStrict);
  const RealVector lambda = spaced_spectrum(n, spec.kappa, true);
  ComplexMatrix a = u * lambda.cast<Complex>().asDiagonal() * v.adjoint();
  return {a, column_sum_rhs(u), spec.kappa, MatrixClass::kGeneral};
}

QlspInstance generate(const GeneratorSpec& spec) {
  return spec.family == Family::kPdLaplacian ? generate_pd(spec) : generate_nonhermitian(spec);
}

void write_instance(std::ostream& out, const QlspInstance& inst) {
  const Index n = inst.n_dim();
  out << "qlsp v1\n";
  out << "N " << n << "\n";
  out << "class " << to_string(inst.matrix_class) << "\n";
  auto emit = [&out](Complex z, bool first) {
    if (!first) out << ' ';
    out << format_decimal(z.real()) << ' ' << format_decimal(z.imag());
  };
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) emit(inst.a(i, j), j == 0);
    out << "\n";
  }
  for (Index j = 0; j < n; ++j) emit(inst.b(j), j == 0);
  out << "\n";
}

void save_instance(const QlspInstance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParseError, "cannot open " + path.string() + " for writing");
  write_instance(out, inst);
  if (!out) throw Error(ErrorCode::kParseError, "write failed for " + path.string());
}

QlspInstance read_instance(std::istream& in, const LoadOptions& options, std::vector<std::string>* warnings) {
  auto warn = [warnings](const std::string& msg) {
    if (warnings != nullptr) warnings->push_back(msg);
  };
  std::string line;
  if (!next_content_line(in, line) || split_keyword(line) != std::pair<std::string, std::string>{"qlsp", "v1"}) {
    throw Error(ErrorCode::kParseError, "missing 'qlsp v1' header");
  }
  if (!next_content_line(in, line)) throw Error(ErrorCode::kParseError, "missing N line");
  auto [n_key, n_text] = split_keyword(line);
  long long n_parsed = 0;
  try {
    std::size_t used = 0;
    n_parsed = std::stoll(n_text, &used);
    if (used != n_text.size()) n_parsed = 0;
  } catch (const std::exception&) {
    n_parsed = 0;
  }
  if (n_key != "N" || n_parsed < 1) throw Error(ErrorCode::kParseError, "bad N line '" + line + "'");
  const Index n = static_cast<Index>(n_parsed);

  if (!next_content_line(in, line)) throw Error(ErrorCode::kParseError, "missing class line");
  auto [c_key, c_text] = split_keyword(line);
  if (c_key != "class") throw Error(ErrorCode::kParseError, "bad class line '" + line + "'");
  QlspInstance inst;
  inst.matrix_class = parse_matrix_class(c_text);

  if (!next_content_line(in, line)) throw Error(ErrorCode::kParseError, "missing matrix rows");
  std::optional<double> declared_kappa;
  if (auto [k_key, k_text] = split_keyword(line); k_key == "kappa") {
    declared_kappa = parse_numbers(k_text, 1, "kappa line")[0];
    if (!next_content_line(in, line)) throw Error(ErrorCode::kParseError, "missing matrix rows");
  }

  inst.a.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    if (i > 0 && !next_content_line(in, line)) throw Error(ErrorCode::kParseError, "truncated matrix");
    const auto row = parse_numbers(line, static_cast<std::size_t>(2 * n), "matrix row");
    for (Index j = 0; j < n; ++j) inst.a(i, j) = Complex(row[2 * j], row[2 * j + 1]);
  }
  if (!next_content_line(in, line)) throw Error(ErrorCode::kParseError, "missing right-hand side");
  const auto rhs = parse_numbers(line, static_cast<std::size_t>(2 * n), "right-hand side");
  inst.b.resize(n);
  for (Index j = 0; j < n; ++j) inst.b(j) = Complex(rhs[2 * j], rhs[2 * j + 1]);
  if (next_content_line(in, line)) throw Error(ErrorCode::kParseError, "trailing content '" + line + "'");

  if (!inst.a.allFinite() || !inst.b.allFinite()) throw Error(ErrorCode::kParseError, "non-finite entries");

  const RealVector sv = singular_values(inst.a);
  double norm = sv(0);
  if (std::abs(norm - 1.0) > kNormTol) {
    if (!options.allow_rescale || !(norm > 0.0)) {
      throw Error(ErrorCode::kNormalizationError, "||A||_2 = " + format_decimal(norm));
    }
    inst.a /= norm;
    warn("rescaled A by 1/" + format_decimal(norm));
    norm = 1.0;
  }
  const double smallest = sv(n - 1) / sv(0);
  if (smallest < kSingularTol) {
    throw Error(ErrorCode::kSingular, "smallest singular value " + format_decimal(smallest));
  }
  inst.kappa = 1.0 / smallest;
  if (declared_kappa && std::abs(*declared_kappa - inst.kappa) > kKappaTol * inst.kappa) {
    warn("declared kappa " + format_decimal(*declared_kappa) + " replaced by computed " +
         format_decimal(inst.kappa));
  }

  const double b_norm = inst.b.norm();
  if (!(b_norm > 0.0)) throw Error(ErrorCode::kNormalizationError, "zero right-hand side");
  if (std::abs(b_norm - 1.0) > kNormTol) {
    warn("normalized b from norm " + format_decimal(b_norm));
    inst.b /= b_norm;
  }

  check_class(inst);
  if (inst.matrix_class != MatrixClass::kGeneral) inst.a = hermitian_part(inst.a);
  return inst;
}

QlspInstance load_instance(const std::filesystem::path& path, const LoadOptions& options,
                           std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path.string());
  return read_instance(in, options, warnings);
}

}  // namespace qlsp
