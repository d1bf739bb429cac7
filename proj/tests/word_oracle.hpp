#pragma once

// Brute-force reducer working directly on words. It shares no code with the
// charge-graded product in ncalg and is used to cross-check it.

#include <map>
#include <string>
#include <utility>

#include "ncsurf/ncalg.hpp"

namespace ncsurf::testing {

class WordOracle {
 public:
  using Element = std::map<std::string, ScalarExpr>;

  explicit WordOracle(const SurfaceProfile& s) : s_(s) {}

  // Canonical word "+..+0..0-..-" -> coefficient.
  Element reduce(const std::string& word) {
    Element todo{{word, ScalarExpr(1)}}, done;
    int guard = 0;
    while (!todo.empty()) {
      if (++guard > 2000000) throw std::runtime_error("word oracle did not terminate");
      auto node = todo.extract(todo.begin());
      const std::string w = node.key();
      const ScalarExpr c = node.mapped();
      auto rewritten = step(w);
      if (!rewritten) {
        accumulate(done, w, c);
        continue;
      }
      for (const auto& [w2, c2] : *rewritten) accumulate(todo, w2, c * c2);
    }
    return done;
  }

  static Element from_ncpoly(const NCPoly& f) {
    Element e;
    for (const auto& t : f.terms())
      accumulate(e, std::string(t.plus, '+') + std::string(t.zero, '0') + std::string(t.minus, '-'), t.coeff);
    return e;
  }

  static std::string word_string(const Word& w) {
    std::string s;
    for (Letter l : w) s += l == Letter::Plus ? '+' : l == Letter::Zero ? '0' : '-';
    return s;
  }

 private:
  static void accumulate(Element& e, const std::string& w, const ScalarExpr& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = e.try_emplace(w, c);
    if (fresh) return;
    it->second += c;
    if (it->second.is_zero()) e.erase(it);
  }

  // rho(X0 + t eps) as a sum of X0-words
  Element rho_words(int t) const {
    Element out;
    ScalarExpr shift = s_.epsilon() * ScalarExpr(static_cast<long>(t));
    const auto& c = s_.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
      // (X0 + shift)^i = sum_j C(i,j) shift^{i-j} X0^j
      Integer binom = 1;
      for (std::size_t j = 0; j <= i; ++j) {
        accumulate(out, std::string(j, '0'), c[i] * ScalarExpr(Rational(binom)) * shift.pow(static_cast<unsigned>(i - j)));
        binom = binom * static_cast<unsigned long>(i - j) / static_cast<unsigned long>(j + 1);
      }
    }
    return out;
  }

  static Element splice(const std::string& w, std::size_t pos, std::size_t len, const Element& middle) {
    Element out;
    for (const auto& [m, c] : middle) accumulate(out, w.substr(0, pos) + m + w.substr(pos + len), c);
    return out;
  }

  std::optional<Element> step(const std::string& w) const {
    const ScalarExpr& eps = s_.epsilon();
    if (auto p = w.find("-+"); p != std::string::npos) return splice(w, p, 2, rho_words(1));
    if (auto p = w.find("+-"); p != std::string::npos) return splice(w, p, 2, rho_words(0));
    if (auto p = w.find("-0"); p != std::string::npos)
      return splice(w, p, 2, Element{{"0-", ScalarExpr(1)}, {"-", eps}});
    bool mixed = w.find('+') != std::string::npos && w.find('-') != std::string::npos;
    if (mixed) {
      if (auto p = w.find("+0"); p != std::string::npos)
        return splice(w, p, 2, Element{{"0+", ScalarExpr(1)}, {"+", -eps}});
    } else if (auto p = w.find("0+"); p != std::string::npos) {
      return splice(w, p, 2, Element{{"+0", ScalarExpr(1)}, {"+", eps}});
    }
    return std::nullopt;
  }

  const SurfaceProfile& s_;
};

}  // namespace ncsurf::testing
