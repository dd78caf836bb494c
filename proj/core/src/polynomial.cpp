#include "ptfsense/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ptfsense {

unsigned Monomial::total_degree() const {
  unsigned d = 0;
  for (auto e : exps) d += e;
  return d;
}

bool grlex_greater(const Monomial& a, const Monomial& b) {
  const unsigned da = a.total_degree();
  const unsigned db = b.total_degree();
  if (da != db) return da > db;
  return a.exps > b.exps;
}

Polynomial::Polynomial(unsigned n) : n_(n) {
  if (n == 0) throw std::invalid_argument("polynomial dimension must be >= 1");
}

Polynomial::Polynomial(unsigned n, std::vector<Monomial> terms)
    : n_(n), terms_(std::move(terms)) {
  if (n == 0) throw std::invalid_argument("polynomial dimension must be >= 1");
  for (const auto& t : terms_) {
    if (t.exps.size() != n_) {
      throw std::invalid_argument("monomial exponent vector length != dimension");
    }
  }
  normalize();
  build_plan();
}

void Polynomial::normalize() {
  std::sort(terms_.begin(), terms_.end(), grlex_greater);
  std::vector<Monomial> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().exps == t.exps) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Monomial& t) { return t.coeff == 0.0; });
  terms_ = std::move(merged);
  is_zero_ = terms_.empty();
  degree_ = 0;
  for (const auto& t : terms_) degree_ = std::max(degree_, t.total_degree());
}

void Polynomial::build_plan() {
  plan_coeff_.clear();
  plan_vars_.clear();
  plan_offset_.clear();
  plan_offset_.reserve(terms_.size() + 1);
  plan_offset_.push_back(0);
  for (const auto& t : terms_) {
    plan_coeff_.push_back(t.coeff);
    for (std::uint32_t v = 0; v < n_; ++v) {
      for (std::uint32_t rep = 0; rep < t.exps[v]; ++rep) plan_vars_.push_back(v);
    }
    plan_offset_.push_back(static_cast<std::uint32_t>(plan_vars_.size()));
  }
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (x.size() != n_) throw std::invalid_argument("evaluate: dimension mismatch");
  double acc = 0.0;
  const std::size_t nt = plan_coeff_.size();
  for (std::size_t i = 0; i < nt; ++i) {
    double prod = plan_coeff_[i];
    for (std::uint32_t k = plan_offset_[i]; k < plan_offset_[i + 1]; ++k) {
      prod *= x[plan_vars_[k]];
    }
    acc += prod;
  }
  return acc;
}

void Polynomial::gradient(std::span<const double> x, std::span<double> out) const {
  if (x.size() != n_) throw std::invalid_argument("gradient: dimension mismatch");
  if (out.size() != n_) throw std::invalid_argument("gradient: output size mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& t : terms_) {
    for (std::uint32_t j = 0; j < n_; ++j) {
      const std::uint32_t ej = t.exps[j];
      if (ej == 0) continue;
      double prod = t.coeff * static_cast<double>(ej);
      for (std::uint32_t rep = 1; rep < ej; ++rep) prod *= x[j];
      for (std::uint32_t k = 0; k < n_; ++k) {
        if (k == j) continue;
        for (std::uint32_t rep = 0; rep < t.exps[k]; ++rep) prod *= x[k];
      }
      out[j] += prod;
    }
  }
}

std::vector<double> Polynomial::gradient(std::span<const double> x) const {
  std::vector<double> g(n_);
  gradient(x, g);
  return g;
}

bool Polynomial::operator==(const Polynomial& other) const {
  if (n_ != other.n_ || terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].coeff != other.terms_[i].coeff) return false;
    if (terms_[i].exps != other.terms_[i].exps) return false;
  }
  return true;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("operator+: dimension mismatch");
  }
  std::vector<Monomial> terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return Polynomial(a.dimension(), std::move(terms));
}

Polynomial operator*(double s, const Polynomial& p) {
  std::vector<Monomial> terms = p.terms();
  for (auto& t : terms) t.coeff *= s;
  return Polynomial(p.dimension(), std::move(terms));
}

Polynomial product_expand(std::span<const Polynomial> factors, unsigned degree_cap) {
  if (factors.empty()) throw std::invalid_argument("product_expand: no factors");
  const unsigned n = factors.front().dimension();
  unsigned total_degree = 0;
  for (const auto& f : factors) {
    if (f.dimension() != n) {
      throw std::invalid_argument("product_expand: dimension mismatch between factors");
    }
    if (f.is_zero()) return Polynomial(n);
    total_degree += f.degree();
  }
  if (total_degree > degree_cap) {
    std::ostringstream msg;
    msg << "product_expand: total degree " << total_degree << " exceeds cap "
        << degree_cap;
    throw std::invalid_argument(msg.str());
  }

  // Iterated convolution keyed on exponent vectors.
  std::map<std::vector<std::uint32_t>, double> acc;
  for (const auto& t : factors.front().terms()) acc[t.exps] = t.coeff;
  for (std::size_t fi = 1; fi < factors.size(); ++fi) {
    std::map<std::vector<std::uint32_t>, double> next;
    for (const auto& [ea, ca] : acc) {
      for (const auto& t : factors[fi].terms()) {
        std::vector<std::uint32_t> e = ea;
        for (unsigned v = 0; v < n; ++v) e[v] += t.exps[v];
        next[std::move(e)] += ca * t.coeff;
      }
    }
    acc = std::move(next);
  }

  double max_abs = 0.0;
  for (const auto& [e, c] : acc) max_abs = std::max(max_abs, std::fabs(c));
  std::vector<Monomial> terms;
  terms.reserve(acc.size());
  for (auto& [e, c] : acc) {
    if (std::fabs(c) < kExpansionDropRel * max_abs) continue;
    terms.push_back(Monomial{c, e});
  }
  return Polynomial(n, std::move(terms));
}

PTF::PTF(Polynomial p) : poly_(std::move(p)) {
  if (poly_.is_zero()) {
    throw std::invalid_argument("PTF: zero polynomial has no threshold function");
  }
}

// ---- JSON -------------------------------------------------------------

std::string to_json(const Polynomial& p) {
  nlohmann::ordered_json j;
  j["n"] = p.dimension();
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : p.terms()) {
    nlohmann::ordered_json jt;
    jt["coeff"] = t.coeff;
    jt["exps"] = t.exps;
    j["terms"].push_back(std::move(jt));
  }
  return j.dump(2) + "\n";
}

Polynomial polynomial_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("polynomial JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("terms")) {
    throw std::invalid_argument("polynomial JSON must be {\"n\":..., \"terms\":[...]}");
  }
  if (!j["n"].is_number_integer() || j["n"].get<std::int64_t>() < 1) {
    throw std::invalid_argument("polynomial JSON: \"n\" must be a positive integer");
  }
  const unsigned n = j["n"].get<unsigned>();
  if (!j["terms"].is_array()) {
    throw std::invalid_argument("polynomial JSON: \"terms\" must be an array");
  }
  std::vector<Monomial> terms;
  terms.reserve(j["terms"].size());
  for (const auto& jt : j["terms"]) {
    if (!jt.is_object() || !jt.contains("coeff") || !jt.contains("exps") ||
        !jt["coeff"].is_number() || !jt["exps"].is_array()) {
      throw std::invalid_argument(
          "polynomial JSON: each term must be {\"coeff\":num, \"exps\":[ints]}");
    }
    Monomial t;
    t.coeff = jt["coeff"].get<double>();
    for (const auto& je : jt["exps"]) {
      if (!je.is_number_integer() || je.get<std::int64_t>() < 0) {
        throw std::invalid_argument("polynomial JSON: exponents must be non-negative integers");
      }
      t.exps.push_back(je.get<std::uint32_t>());
    }
    if (t.exps.size() != n) {
      throw std::invalid_argument("polynomial JSON: exponent list length != n");
    }
    terms.push_back(std::move(t));
  }
  return Polynomial(n, std::move(terms));
}

Polynomial load_polynomial(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open polynomial file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return polynomial_from_json(buf.str());
}

void save_polynomial(const Polynomial& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << to_json(p);
}

}  // namespace ptfsense
