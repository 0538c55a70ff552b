#include "anticyc/exactalg/linalg.hpp"

#include <type_traits>

#include <algorithm>

namespace anticyc::exactalg {

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

IntMatrix to_integer(const RatMatrix& m) {
  IntMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).get_den() != 1) throw UsageError("exactalg", "matrix entry is not integral");
      r(i, j) = m(i, j).get_num();
    }
  return r;
}

std::size_t SmithForm::rank() const {
  std::size_t r = 0;
  for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i)
    if (S(i, i) != 0) ++r;
  return r;
}

std::vector<Integer> SmithForm::diagonal() const {
  std::vector<Integer> d;
  for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i)
    if (S(i, i) != 0) d.push_back(S(i, i));
  return d;
}

SmithForm smith_normal_form(const IntMatrix& M) {
  const std::size_t m = M.rows(), n = M.cols();
  SmithForm f{IntMatrix::identity(m), M, IntMatrix::identity(n)};
  IntMatrix& S = f.S;
  for (std::size_t s = 0; s < std::min(m, n); ++s) {
    for (;;) {
      // Locate the pivot.
      bool found = false;
      std::size_t pr = s, pc = s;
      Integer best;
      for (std::size_t i = s; i < m; ++i)
        for (std::size_t j = s; j < n; ++j) {
          if (S(i, j) == 0) continue;
          Integer a = abs(S(i, j));
          if (!found || a < best) {
            found = true;
            best = a;
            pr = i;
            pc = j;
          }
        }
      if (!found) return f;
      S.swap_rows(s, pr);
      f.U.swap_rows(s, pr);
      S.swap_cols(s, pc);
      f.V.swap_cols(s, pc);

      bool clean = true;
      for (std::size_t i = s + 1; i < m; ++i) {
        if (S(i, s) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), S(i, s).get_mpz_t(), S(s, s).get_mpz_t());
        S.add_row(i, s, -q);
        f.U.add_row(i, s, -q);
        if (S(i, s) != 0) clean = false;
      }
      for (std::size_t j = s + 1; j < n; ++j) {
        if (S(s, j) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), S(s, j).get_mpz_t(), S(s, s).get_mpz_t());
        S.add_col(j, s, -q);
        f.V.add_col(j, s, -q);
        if (S(s, j) != 0) clean = false;
      }
      if (!clean) continue;

      // Enforce the divisibility chain.
      bool divides = true;
      for (std::size_t i = s + 1; i < m && divides; ++i)
        for (std::size_t j = s + 1; j < n; ++j)
          if (!mpz_divisible_p(S(i, j).get_mpz_t(), S(s, s).get_mpz_t())) {
            S.add_row(s, i, 1);
            f.U.add_row(s, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (S(s, s) < 0) {
      S.negate_row(s);
      f.U.negate_row(s);
    }
  }
  return f;
}

IntMatrix hermite_normal_form(const IntMatrix& M) {
  IntMatrix H = M;
  const std::size_t m = H.rows(), n = H.cols();
  std::size_t pivot_row = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;
  for (std::size_t c = 0; c < n && pivot_row < m; ++c) {
    // Euclid down column c among rows >= pivot_row.
    for (;;) {
      std::size_t best = m;
      for (std::size_t i = pivot_row; i < m; ++i)
        if (H(i, c) != 0 && (best == m || abs(H(i, c)) < abs(H(best, c)))) best = i;
      if (best == m) break;
      H.swap_rows(pivot_row, best);
      bool done = true;
      for (std::size_t i = pivot_row + 1; i < m; ++i) {
        if (H(i, c) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), H(i, c).get_mpz_t(), H(pivot_row, c).get_mpz_t());
        H.add_row(i, pivot_row, -q);
        if (H(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (H(pivot_row, c) == 0) continue;
    if (H(pivot_row, c) < 0) H.negate_row(pivot_row);
    for (std::size_t i = 0; i < pivot_row; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), H(i, c).get_mpz_t(), H(pivot_row, c).get_mpz_t());
      H.add_row(i, pivot_row, -q);
    }
    ++pivot_row;
  }
  IntMatrix out(pivot_row, n);
  for (std::size_t i = 0; i < pivot_row; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = H(i, j);
  return out;
}

IntMatrix integer_kernel(const IntMatrix& M) {
  const std::size_t n = M.cols();
  if (M.rows() == 0) return IntMatrix::identity(n);
  SmithForm f = smith_normal_form(M);
  std::size_t r = f.rank();
  IntMatrix K(n - r, n);
  for (std::size_t k = r; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) K(k - r, i) = f.V(i, k);
  return hermite_normal_form(K);
}

namespace {

// Reduced row echelon form over a field, returns pivot columns.
template <class F, class Inv>
std::vector<std::size_t> rref(Matrix<F>& A, Inv invert, const F* modulus) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  auto reduce = [&](F& x) {
    if constexpr (std::is_same_v<F, Integer>)
      if (modulus) x = mod(x, *modulus);
  };
  for (std::size_t c = 0; c < A.cols() && r < A.rows(); ++c) {
    std::size_t p = A.rows();
    for (std::size_t i = r; i < A.rows(); ++i)
      if (A(i, c) != 0) {
        p = i;
        break;
      }
    if (p == A.rows()) continue;
    A.swap_rows(r, p);
    F inv = invert(A(r, c));
    for (std::size_t j = 0; j < A.cols(); ++j) {
      A(r, j) *= inv;
      reduce(A(r, j));
    }
    for (std::size_t i = 0; i < A.rows(); ++i) {
      if (i == r || A(i, c) == 0) continue;
      F factor = A(i, c);
      for (std::size_t j = 0; j < A.cols(); ++j) {
        A(i, j) -= factor * A(r, j);
        reduce(A(i, j));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class F>
Matrix<F> kernel_from_rref(const Matrix<F>& R, const std::vector<std::size_t>& pivots, const F* modulus) {
  const std::size_t n = R.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  Matrix<F> K(n - pivots.size(), n);
  std::size_t k = 0;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    K(k, free) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      F v = -R(i, free);
      if constexpr (std::is_same_v<F, Integer>)
        if (modulus) v = mod(v, *modulus);
      K(k, pivots[i]) = v;
    }
    ++k;
  }
  return K;
}

}  // namespace

RatMatrix rational_kernel(const RatMatrix& M) {
  RatMatrix R = M;
  auto pivots = rref<Rational>(R, [](const Rational& x) -> Rational { return Rational(1) / x; }, nullptr);
  return kernel_from_rref<Rational>(R, pivots, nullptr);
}

std::size_t rank(const IntMatrix& M) { return rank(to_rational(M)); }

std::size_t rank(const RatMatrix& M) {
  RatMatrix R = M;
  return rref<Rational>(R, [](const Rational& x) -> Rational { return Rational(1) / x; }, nullptr).size();
}

Integer determinant(const IntMatrix& M) {
  if (M.rows() != M.cols()) throw UsageError("exactalg", "determinant of a non-square matrix");
  const std::size_t n = M.rows();
  if (n == 0) return 1;
  // Bareiss fraction-free elimination.
  IntMatrix A = M;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (A(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && A(p, k) == 0) ++p;
      if (p == n) return 0;
      A.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = A(i, j) * A(k, k) - A(i, k) * A(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        A(i, j) = v;
      }
    prev = A(k, k);
  }
  return sign * A(n - 1, n - 1);
}

Rational determinant(const RatMatrix& M) {
  if (M.rows() != M.cols()) throw UsageError("exactalg", "determinant of a non-square matrix");
  RatMatrix A = M;
  Rational det = 1;
  const std::size_t n = A.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && A(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      A.swap_rows(c, p);
      det = -det;
    }
    det *= A(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (A(i, c) == 0) continue;
      Rational f = A(i, c) / A(c, c);
      for (std::size_t j = c; j < n; ++j) A(i, j) -= f * A(c, j);
    }
  }
  return det;
}

RatMatrix inverse(const RatMatrix& M) {
  const std::size_t n = M.rows();
  if (n != M.cols()) throw UsageError("exactalg", "inverse of a non-square matrix");
  RatMatrix A(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) A(i, j) = M(i, j);
    A(i, n + i) = 1;
  }
  auto pivots = rref<Rational>(A, [](const Rational& x) -> Rational { return Rational(1) / x; }, nullptr);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw UsageError("exactalg", "singular matrix");
  RatMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = A(i, n + j);
  return inv;
}

std::optional<std::vector<Integer>> solve_integer(const IntMatrix& M, const std::vector<Integer>& b) {
  if (b.size() != M.rows()) throw UsageError("exactalg", "right-hand side length mismatch");
  SmithForm f = smith_normal_form(M);
  // S y = U b, x = V y
  std::vector<Integer> ub = f.U * b;
  std::vector<Integer> y(M.cols());
  for (std::size_t i = 0; i < ub.size(); ++i) {
    Integer d = (i < std::min(M.rows(), M.cols())) ? f.S(i, i) : Integer(0);
    if (d == 0) {
      if (ub[i] != 0) return std::nullopt;
      continue;
    }
    if (!mpz_divisible_p(ub[i].get_mpz_t(), d.get_mpz_t())) return std::nullopt;
    y[i] = ub[i] / d;
  }
  return f.V * y;
}

std::optional<std::vector<Rational>> solve_rational(const RatMatrix& M, const std::vector<Rational>& b) {
  const std::size_t m = M.rows(), n = M.cols();
  if (b.size() != m) throw UsageError("exactalg", "right-hand side length mismatch");
  RatMatrix A(m, n + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) A(i, j) = M(i, j);
    A(i, n) = b[i];
  }
  auto pivots = rref<Rational>(A, [](const Rational& x) -> Rational { return Rational(1) / x; }, nullptr);
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == n) return std::nullopt;
    x[pivots[i]] = A(i, n);
  }
  return x;
}

IntMatrix congruence_sublattice(const IntMatrix& A, const std::vector<Integer>& moduli) {
  const std::size_t n = A.cols();
  if (moduli.size() != A.rows()) throw UsageError("exactalg", "one modulus per row required");
  if (A.rows() == 0) return IntMatrix::identity(n);
  // Common modulus N; scale row i by N / m_i.
  Integer N = 1;
  for (const auto& m : moduli) N = lcm(N, m);
  IntMatrix B = A;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) B(i, j) = mod(A(i, j) * (N / moduli[i]), N);
  SmithForm f = smith_normal_form(B);
  // x in lattice iff S (V^{-1} x) == 0 mod N; x = V w with s_k w_k == 0 mod N.
  IntMatrix basis(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    Integer s = (k < std::min(B.rows(), n)) ? f.S(k, k) : Integer(0);
    Integer mult = N / gcd(s, N);
    for (std::size_t i = 0; i < n; ++i) basis(k, i) = f.V(i, k) * mult;
  }
  return hermite_normal_form(basis);
}

IntMatrix reduce_mod(const IntMatrix& M, const Integer& m) {
  IntMatrix r(M.rows(), M.cols());
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) r(i, j) = mod(M(i, j), m);
  return r;
}

IntMatrix kernel_mod_prime(const IntMatrix& M, const Integer& p) {
  IntMatrix R = reduce_mod(M, p);
  auto pivots = rref<Integer>(R, [&](const Integer& x) -> Integer { return inverse_mod(x, p); }, &p);
  return kernel_from_rref<Integer>(R, pivots, &p);
}

std::size_t rank_mod_prime(const IntMatrix& M, const Integer& p) {
  IntMatrix R = reduce_mod(M, p);
  return rref<Integer>(R, [&](const Integer& x) -> Integer { return inverse_mod(x, p); }, &p).size();
}

std::optional<IntMatrix> solve_mod_prime(const IntMatrix& A, const IntMatrix& B, const Integer& p) {
  if (A.rows() != B.rows()) throw UsageError("exactalg", "solve_mod_prime dimension mismatch");
  const std::size_t d = A.cols(), c = B.cols();
  IntMatrix R(A.rows(), d + c);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t j = 0; j < d; ++j) R(i, j) = mod(A(i, j), p);
    for (std::size_t j = 0; j < c; ++j) R(i, d + j) = mod(B(i, j), p);
  }
  auto pivots = rref<Integer>(R, [&](const Integer& x) -> Integer { return inverse_mod(x, p); }, &p);
  std::size_t rank_a = 0;
  while (rank_a < pivots.size() && pivots[rank_a] < d) ++rank_a;
  if (rank_a != d) throw UsageError("exactalg", "solve_mod_prime needs full column rank");
  if (pivots.size() != d) return std::nullopt;
  IntMatrix X(d, c);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < c; ++j) X(i, j) = R(i, d + j);
  return X;
}

IntMatrix inverse_mod(const IntMatrix& M, const Integer& m) {
  const std::size_t n = M.rows();
  if (n != M.cols()) throw UsageError("exactalg", "inverse of a non-square matrix");
  Integer det = determinant(M);
  Integer det_inv = inverse_mod(det, m);
  // adj(M) = det * M^{-1} is integral.
  RatMatrix inv = inverse(to_rational(M));
  IntMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational adj = inv(i, j) * Rational(det);
      out(i, j) = mod(adj.get_num() * det_inv, m);
    }
  return out;
}

std::vector<Rational> characteristic_polynomial(const RatMatrix& M) {
  // Hessenberg reduction followed by the standard recurrence; exact over Q.
  const std::size_t n = M.rows();
  if (n != M.cols()) throw UsageError("exactalg", "characteristic polynomial of a non-square matrix");
  RatMatrix H = M;
  for (std::size_t m = 1; m + 1 < n + 1 && m < n; ++m) {
    std::size_t i = m;
    while (i < n && H(i, m - 1) == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      H.swap_rows(i, m);
      H.swap_cols(i, m);
    }
    for (std::size_t r = m + 1; r < n; ++r) {
      if (H(r, m - 1) == 0) continue;
      Rational u = H(r, m - 1) / H(m, m - 1);
      H.add_row(r, m, -u);
      H.add_col(m, r, u);
    }
  }
  // p_k(x) = charpoly of leading k x k block.
  std::vector<std::vector<Rational>> p(n + 1);
  p[0] = {Rational(1)};
  for (std::size_t k = 1; k <= n; ++k) {
    // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_{i,k} * prod_{j=i+1}^{k} h_{j,j-1} * p_{i-1}
    std::vector<Rational> pk(k + 1);
    for (std::size_t d = 0; d < p[k - 1].size(); ++d) {
      pk[d + 1] += p[k - 1][d];
      pk[d] -= H(k - 1, k - 1) * p[k - 1][d];
    }
    Rational t = 1;
    for (std::size_t i = k - 1; i-- > 0;) {
      t *= H(i + 1, i);
      Rational coef = t * H(i, k - 1);
      if (coef == 0) continue;
      for (std::size_t d = 0; d < p[i].size(); ++d) pk[d] -= coef * p[i][d];
    }
    p[k] = pk;
  }
  return p[n];
}

std::vector<Integer> characteristic_polynomial(const IntMatrix& M) {
  auto c = characteristic_polynomial(to_rational(M));
  std::vector<Integer> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].get_num();
  return out;
}

}  // namespace anticyc::exactalg
