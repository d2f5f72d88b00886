#include "padrig/linalg.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "padrig/error.hpp"

namespace padrig {

JordanType::JordanType(std::vector<JordanBlock> blocks) : blocks_(std::move(blocks)) {
  for (const auto& b : blocks_)
    if (b.size == 0) fail(ErrorKind::input, "Jordan block of size 0");
  std::sort(blocks_.begin(), blocks_.end(), [](const JordanBlock& a, const JordanBlock& b) {
    if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
    return a.size > b.size;
  });
}

std::size_t JordanType::rank() const noexcept {
  std::size_t n = 0;
  for (const auto& b : blocks_) n += b.size;
  return n;
}

std::vector<Rational> JordanType::eigenvalues() const {
  std::vector<Rational> out;
  for (const auto& b : blocks_) out.insert(out.end(), b.size, b.eigenvalue);
  return out;
}

MatrixQ JordanType::matrix() const {
  MatrixQ m(rank());
  std::size_t at = 0;
  for (const auto& b : blocks_) {
    for (std::size_t i = 0; i < b.size; ++i) {
      m(at + i, at + i) = b.eigenvalue;
      if (i + 1 < b.size) m(at + i, at + i + 1) = 1;
    }
    at += b.size;
  }
  return m;
}

JordanType JordanType::shifted(const Rational& c) const {
  auto blocks = blocks_;
  for (auto& b : blocks) b.eigenvalue += c;
  return JordanType(std::move(blocks));
}

bool JordanType::is_resonant() const {
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    for (std::size_t j = i + 1; j < blocks_.size(); ++j) {
      const Rational d = blocks_[i].eigenvalue - blocks_[j].eigenvalue;
      if (!d.is_zero() && d.is_integer()) return true;
    }
  return false;
}

std::string JordanType::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < blocks_.size();) {
    if (i) os << ' ';
    os << '(' << blocks_[i].eigenvalue.to_string() << ':';
    std::size_t j = i;
    for (; j < blocks_.size() && blocks_[j].eigenvalue == blocks_[i].eigenvalue; ++j) os << ' ' << blocks_[j].size;
    os << ')';
    i = j;
  }
  return os.str();
}

std::vector<Rational> characteristic_polynomial(const MatrixQ& a) {
  // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
  const std::size_t n = a.size();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  MatrixQ m(n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
    c[n - k] = -(a * m).trace() / Rational(static_cast<long>(k));
  }
  return c;
}

namespace {

std::vector<Integer> divisors(Integer n) {
  n = abs(n);
  std::vector<std::pair<Integer, int>> factors;
  for (Integer d = 2; d * d <= n && d < 2000000; ++d) {
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e) factors.emplace_back(d, e);
  }
  if (n > 1) factors.emplace_back(n, 1);
  std::vector<Integer> divs{1};
  for (const auto& [q, e] : factors) {
    const std::size_t count = divs.size();
    Integer pw = 1;
    for (int i = 0; i < e; ++i) {
      pw *= q;
      for (std::size_t k = 0; k < count; ++k) divs.push_back(divs[k] * pw);
    }
  }
  return divs;
}

// Synthetic division by (x - r); returns false if r is not a root.
bool divide_root(std::vector<Rational>& poly, const Rational& r) {
  const std::size_t deg = poly.size() - 1;
  std::vector<Rational> q(deg);
  Rational carry;
  for (std::size_t i = deg; i >= 1; --i) {
    carry = poly[i] + carry * r;
    q[i - 1] = carry;
  }
  const Rational rem = poly[0] + carry * r;
  if (!rem.is_zero()) return false;
  poly = std::move(q);
  return true;
}

}  // namespace

std::vector<std::pair<Rational, std::size_t>> rational_roots(std::vector<Rational> poly) {
  std::map<Rational, std::size_t> roots;
  while (poly.size() > 1 && poly[0].is_zero()) {
    poly.erase(poly.begin());
    ++roots[Rational(0)];
  }
  while (poly.size() > 1) {
    Integer scale = 1;
    for (const auto& c : poly) {
      Integer d = c.denominator();
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), d.get_mpz_t());
    }
    const Integer a0 = (poly.front() * Rational(scale)).numerator();
    const Integer an = (poly.back() * Rational(scale)).numerator();
    bool found = false;
    for (const auto& num : divisors(a0)) {
      for (const auto& den : divisors(an)) {
        for (int sign : {1, -1}) {
          const Rational r(Integer(num * sign), den);
          if (divide_root(poly, r)) {
            ++roots[r];
            found = true;
            break;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found) fail(ErrorKind::condition, "non-rational spectrum: characteristic polynomial does not split over Q");
  }
  return {roots.begin(), roots.end()};
}

JordanDecomposition jordan_form(const MatrixQ& a) {
  const std::size_t n = a.size();
  std::vector<JordanBlock> blocks;
  // Column blocks of the transform, in the canonical block order.
  std::vector<std::pair<JordanBlock, std::vector<std::vector<Rational>>>> chains;

  auto apply = [&](const MatrixQ& m, const std::vector<Rational>& v) {
    std::vector<Rational> out(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!m(i, j).is_zero() && !v[j].is_zero()) out[i] += m(i, j) * v[j];
    return out;
  };
  auto span_rank = [&](const std::vector<std::vector<Rational>>& vs) {
    DenseQ d(vs.size(), n);
    for (std::size_t r = 0; r < vs.size(); ++r)
      for (std::size_t c = 0; c < n; ++c) d.at(r, c) = vs[r][c];
    return rank(d);
  };

  for (const auto& [lambda, mult] : rational_roots(characteristic_polynomial(a))) {
    const MatrixQ nil = a - lambda * MatrixQ::identity(n);
    std::vector<MatrixQ> powers{MatrixQ::identity(n)};
    std::vector<std::size_t> ranks{n};
    while (ranks.back() > n - mult) {
      powers.push_back(powers.back() * nil);
      ranks.push_back(rank(powers.back()));
    }
    const std::size_t depth = powers.size() - 1;
    // Vectors already placed at height s (the s-th vector of a chain, counted from the head).
    std::vector<std::vector<std::vector<Rational>>> placed(depth + 2);
    std::vector<std::pair<JordanBlock, std::vector<std::vector<Rational>>>> local;
    for (std::size_t s = depth; s >= 1; --s) {
      const auto ker_below = s > 1 ? kernel(powers[s - 1]) : std::vector<std::vector<Rational>>{};
      std::vector<std::vector<Rational>> base = ker_below;
      base.insert(base.end(), placed[s].begin(), placed[s].end());
      std::size_t base_rank = span_rank(base);
      for (const auto& v : kernel(powers[s])) {
        auto trial = base;
        trial.push_back(v);
        const std::size_t r = span_rank(trial);
        if (r == base_rank) continue;
        base = std::move(trial);
        base_rank = r;
        // Chain e_1 = N^(s-1) v, ..., e_s = v; e_i sits at height s - i + 1 ... placed by level.
        std::vector<std::vector<Rational>> chain(s);
        chain[s - 1] = v;
        for (std::size_t i = s - 1; i >= 1; --i) chain[i - 1] = apply(nil, chain[i]);
        for (std::size_t i = 0; i + 1 < s; ++i) placed[i + 1].push_back(chain[i]);
        local.push_back({JordanBlock{lambda, s}, std::move(chain)});
      }
    }
    std::stable_sort(local.begin(), local.end(),
                     [](const auto& x, const auto& y) { return x.first.size > y.first.size; });
    for (auto& c : local) {
      blocks.push_back(c.first);
      chains.push_back(std::move(c));
    }
  }

  JordanType type(blocks);
  MatrixQ t(n);
  std::size_t col = 0;
  for (const auto& [blk, chain] : chains)
    for (const auto& v : chain) {
      for (std::size_t i = 0; i < n; ++i) t(i, col) = v[i];
      ++col;
    }
  if (col != n) fail(ErrorKind::inconsistency, "Jordan chain construction did not span the space");
  return {type, t};
}

std::size_t centralizer_dim(const JordanType& j, EigenvalueGrouping mode) {
  std::size_t dim = 0;
  for (const auto& a : j.blocks())
    for (const auto& b : j.blocks()) {
      const Rational d = a.eigenvalue - b.eigenvalue;
      const bool same = mode == EigenvalueGrouping::exact ? d.is_zero() : d.is_integer();
      if (same) dim += std::min(a.size, b.size);
    }
  return dim;
}

std::vector<Rational> end_exponents(const std::vector<Rational>& exponents) {
  std::vector<Rational> out;
  out.reserve(exponents.size() * exponents.size());
  for (const auto& a : exponents)
    for (const auto& b : exponents) out.push_back(a - b);
  return out;
}

}  // namespace padrig
