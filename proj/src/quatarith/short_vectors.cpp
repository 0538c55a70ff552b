#include "anticyc/quatarith/short_vectors.hpp"

#include "anticyc/error.hpp"

namespace anticyc::quatarith {

using namespace exactalg;

namespace {

// Gram-Schmidt data from a Gram matrix: mu and squared norms.
void gso(const RatMatrix& G, RatMatrix& mu, std::vector<Rational>& bstar) {
  const std::size_t n = G.rows();
  mu = RatMatrix(n, n);
  bstar.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Rational s = G(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= mu(j, k) * mu(i, k) * bstar[k];
      mu(i, j) = s / bstar[j];
    }
    Rational s = G(i, i);
    for (std::size_t k = 0; k < i; ++k) s -= mu(i, k) * mu(i, k) * bstar[k];
    bstar[i] = s;
  }
}

Integer round_nearest(const Rational& x) { return exactalg::floor(x + Rational(1, 2)); }

}  // namespace

IntMatrix lll_reduce(const RatMatrix& gram) {
  const std::size_t n = gram.rows();
  IntMatrix T = IntMatrix::identity(n);
  RatMatrix G = gram;
  auto apply = [&](std::size_t dst, std::size_t src, const Integer& q) {
    // b_dst -= q b_src
    T.add_row(dst, src, -q);
    Rational rq(q);
    for (std::size_t k = 0; k < n; ++k) G(dst, k) -= rq * G(src, k);
    for (std::size_t k = 0; k < n; ++k) G(k, dst) -= rq * G(k, src);
  };
  auto swap = [&](std::size_t a, std::size_t b) {
    T.swap_rows(a, b);
    G.swap_rows(a, b);
    G.swap_cols(a, b);
  };
  RatMatrix mu;
  std::vector<Rational> bstar;
  std::size_t k = 1;
  while (k < n) {
    gso(G, mu, bstar);
    for (std::size_t j = k; j-- > 0;) {
      Integer q = round_nearest(mu(k, j));
      if (q != 0) {
        apply(k, j, q);
        gso(G, mu, bstar);
      }
    }
    if (bstar[k] >= (Rational(3, 4) - mu(k, k - 1) * mu(k, k - 1)) * bstar[k - 1]) {
      ++k;
    } else {
      swap(k, k - 1);
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return T;
}

void short_vectors(const RatMatrix& gram, const Rational& bound,
                   const std::function<bool(const std::vector<Integer>&, const Rational&)>& visit) {
  const std::size_t n = gram.rows();
  if (n == 0 || bound <= 0) return;
  IntMatrix T = lll_reduce(gram);
  RatMatrix Tq = to_rational(T);
  RatMatrix G = Tq * gram * Tq.transpose();

  // Q(x) = sum_i d_i (x_i + sum_{j>i} m_ij x_j)^2
  RatMatrix m(n, n);
  std::vector<Rational> d(n);
  RatMatrix A = G;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = A(i, i);
    if (d[i] <= 0) throw UsageError("quatarith", "form is not positive definite");
    for (std::size_t j = i + 1; j < n; ++j) m(i, j) = A(i, j) / d[i];
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = i + 1; k < n; ++k) A(j, k) -= m(i, j) * A(i, k);
  }

  std::vector<Integer> x(n), out(n);
  std::vector<Rational> remaining(n + 1);
  remaining[n] = bound;
  bool stop = false;
  std::function<void(std::size_t)> descend = [&](std::size_t level) {
    const std::size_t i = level - 1;
    Rational center = 0;
    for (std::size_t j = i + 1; j < n; ++j) center -= m(i, j) * Rational(x[j]);
    Rational r = remaining[level] / d[i];
    Integer hi = floor_add_sqrt(center, r);
    Integer lo = -floor_add_sqrt(-center, r);
    for (Integer v = lo; v <= hi && !stop; ++v) {
      Rational t = Rational(v) - center;
      Rational used = d[i] * t * t;
      if (used > remaining[level]) continue;
      x[i] = v;
      remaining[i] = remaining[level] - used;
      if (i == 0) {
        bool nonzero = false;
        for (const auto& c : x) nonzero = nonzero || c != 0;
        if (!nonzero) continue;
        for (std::size_t col = 0; col < n; ++col) {
          Integer s = 0;
          for (std::size_t row = 0; row < n; ++row) s += x[row] * T(row, col);
          out[col] = s;
        }
        if (!visit(out, bound - remaining[0])) stop = true;
      } else {
        descend(i);
      }
    }
    x[i] = 0;
  };
  descend(n);
}

std::vector<std::vector<Integer>> vectors_of_norm(const RatMatrix& gram, const Rational& value) {
  std::vector<std::vector<Integer>> out;
  short_vectors(gram, value, [&](const std::vector<Integer>& c, const Rational& q) {
    if (q != value) return true;
    for (const auto& x : c) {
      if (x == 0) continue;
      if (x > 0) out.push_back(c);
      break;
    }
    return true;
  });
  return out;
}

}  // namespace anticyc::quatarith
