#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ptfsense {

/// One term of a sparse multivariate polynomial: coeff * prod_i x_i^exps[i].
/// exps has one entry per ambient variable (zeros included).
struct Monomial {
  double coeff = 0.0;
  std::vector<std::uint32_t> exps;

  unsigned total_degree() const;
};

/// Graded-lexicographic term order, descending (leading term first).
/// Higher total degree wins; ties broken by the exponent vector, first
/// differing entry decides.
bool grlex_greater(const Monomial& a, const Monomial& b);

/// Sparse multivariate polynomial over the reals, immutable after
/// construction. Terms are kept in canonical form: graded-lex descending,
/// like terms merged, exact-zero coefficients removed. The zero polynomial
/// is an empty term list with degree 0.
class Polynomial {
 public:
  /// Zero polynomial in n variables.
  explicit Polynomial(unsigned n);

  /// Normalizes the given terms (merge, sort, drop zeros).
  /// Throws std::invalid_argument if any exponent vector has length != n
  /// or n == 0.
  Polynomial(unsigned n, std::vector<Monomial> terms);

  unsigned dimension() const { return n_; }
  unsigned degree() const { return degree_; }
  bool is_zero() const { return is_zero_; }
  const std::vector<Monomial>& terms() const { return terms_; }

  /// Sum over terms of coeff * prod x_i^e_i. Throws on dimension mismatch.
  double evaluate(std::span<const double> x) const;
  double operator()(std::span<const double> x) const { return evaluate(x); }

  /// Exact partial derivatives at x.
  std::vector<double> gradient(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> out) const;

  /// Canonical-form equality (exact coefficient comparison).
  bool operator==(const Polynomial& other) const;

 private:
  unsigned n_ = 1;
  unsigned degree_ = 0;
  bool is_zero_ = true;
  std::vector<Monomial> terms_;

  // Flattened evaluation plan: term i multiplies plan_coeff_[i] by
  // x[plan_vars_[k]] for k in [plan_offset_[i], plan_offset_[i+1]).
  std::vector<double> plan_coeff_;
  std::vector<std::uint32_t> plan_vars_;
  std::vector<std::uint32_t> plan_offset_;

  void normalize();
  void build_plan();
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator*(double s, const Polynomial& p);

/// Largest total degree product_expand accepts by default. Expansion of
/// higher degrees blows up coefficient magnitudes past what double
/// arithmetic tracks reliably.
inline constexpr unsigned kDefaultExpansionDegreeCap = 20;

/// Threshold for dropping near-cancelled terms after expansion, relative
/// to the largest absolute coefficient of the result.
inline constexpr double kExpansionDropRel = 1e-14;

/// Fully expanded product of the factors with like terms merged.
/// The resulting degree is exactly the sum of the factor degrees.
/// Throws std::invalid_argument on dimension mismatch or if the total
/// degree exceeds degree_cap.
Polynomial product_expand(std::span<const Polynomial> factors,
                          unsigned degree_cap = kDefaultExpansionDegreeCap);

/// Polynomial threshold function f(x) = sgn(p(x)) with the fixed
/// convention sgn(0) = +1. Rejects the zero polynomial.
class PTF {
 public:
  explicit PTF(Polynomial p);

  const Polynomial& poly() const { return poly_; }
  unsigned dimension() const { return poly_.dimension(); }
  unsigned degree() const { return poly_.degree(); }

  /// +1 if p(x) >= 0, else -1.
  int sign(std::span<const double> x) const {
    return poly_.evaluate(x) >= 0.0 ? +1 : -1;
  }

 private:
  Polynomial poly_;
};

// ---- JSON file format -----------------------------------------------------
// {"n": int, "terms": [{"coeff": float, "exps": [int, ...]}, ...]}
// Output is canonical: terms sorted graded-lex descending, shortest
// round-trip float representation. Round-tripping a canonical polynomial
// is the identity.

std::string to_json(const Polynomial& p);
Polynomial polynomial_from_json(const std::string& text);
Polynomial load_polynomial(const std::string& path);
void save_polynomial(const Polynomial& p, const std::string& path);

}  // namespace ptfsense
