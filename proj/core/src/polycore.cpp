#include "multspec/polycore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <type_traits>
#include <utility>

#include "fft.hpp"

namespace multspec {

template <class R>
HomForm<R>::HomForm(std::vector<Complex<R>> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorKind::InvalidArgument, "form needs at least one coefficient");
  for (const auto& c : coeffs_)
    if (!is_finite(c)) throw Error(ErrorKind::Overflow, "non-finite form coefficient");
}

template <class R>
HomForm<R> HomForm<R>::monomial(int degree, int x_power, Complex<R> c) {
  if (degree < 0 || x_power < 0 || x_power > degree)
    throw Error(ErrorKind::InvalidArgument, "bad monomial exponents");
  std::vector<Complex<R>> v(static_cast<std::size_t>(degree) + 1, Complex<R>(0));
  v[static_cast<std::size_t>(x_power)] = c;
  return HomForm(std::move(v));
}

template <class R>
bool HomForm<R>::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex<R>& c) { return c == Complex<R>(0); });
}

template <class R>
R HomForm<R>::norm_inf() const noexcept {
  using std::abs;
  R m(0);
  for (const auto& c : coeffs_) {
    R a = abs(c);
    if (a > m) m = a;
  }
  return m;
}

template <class R>
Complex<R> HomForm<R>::operator()(const Complex<R>& x, const Complex<R>& y) const {
  using std::abs;
  const int d = degree();
  Complex<R> acc(0);
  if (abs(y) >= abs(x)) {
    if (y == Complex<R>(0)) return acc;  // x == y == 0
    const Complex<R> t = x / y;
    for (int i = d; i >= 0; --i) acc = acc * t + coeffs_[static_cast<std::size_t>(i)];
    return acc * ipow(y, d);
  }
  const Complex<R> t = y / x;
  for (int i = 0; i <= d; ++i) acc = acc * t + coeffs_[static_cast<std::size_t>(i)];
  return acc * ipow(x, d);
}

template <class R>
HomForm<R> HomForm<R>::partial_x() const {
  const int d = degree();
  if (d == 0) return HomForm();
  std::vector<Complex<R>> v(static_cast<std::size_t>(d));
  for (int i = 1; i <= d; ++i)
    v[static_cast<std::size_t>(i - 1)] = coeffs_[static_cast<std::size_t>(i)] * R(static_cast<double>(i));
  return HomForm(std::move(v));
}

template <class R>
HomForm<R> HomForm<R>::partial_y() const {
  const int d = degree();
  if (d == 0) return HomForm();
  std::vector<Complex<R>> v(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    v[static_cast<std::size_t>(i)] = coeffs_[static_cast<std::size_t>(i)] * R(static_cast<double>(d - i));
  return HomForm(std::move(v));
}

template <class R>
HomForm<R> HomForm<R>::normalized() const {
  const R m = norm_inf();
  if (m == R(0)) return *this;
  return scaled(Complex<R>(R(1) / m));
}

template <class R>
HomForm<R> HomForm<R>::scaled(const Complex<R>& s) const {
  std::vector<Complex<R>> v(coeffs_);
  for (auto& c : v) c *= s;
  return HomForm(std::move(v));
}

template <class R>
HomForm<R> HomForm<R>::combine(const HomForm& other, R sign) const {
  if (other.degree() != degree()) throw Error(ErrorKind::InvalidArgument, "adding forms of different degree");
  std::vector<Complex<R>> v(coeffs_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += sign * other.coeffs_[i];
  return HomForm(std::move(v));
}

namespace {

// Software quad arithmetic makes schoolbook products of long forms the
// bottleneck, so large extended-precision work goes through transforms.
constexpr std::size_t kFftThreshold = 96;

std::size_t fft_size(std::size_t n) {
  std::size_t size = 1;
  while (size < n) size <<= 1;
  return size;
}

template <class R>
std::vector<Complex<R>> fft_convolve(std::span<const Complex<R>> a, std::span<const Complex<R>> b) {
  const std::size_t len = a.size() + b.size() - 1;
  const std::size_t size = fft_size(len);
  std::vector<Complex<R>> fa(size, Complex<R>(0)), fb(size, Complex<R>(0));
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  detail::dft(fa, -1);
  detail::dft(fb, -1);
  for (std::size_t i = 0; i < size; ++i) fa[i] *= fb[i];
  detail::dft(fa, +1);
  fa.resize(len);
  const R inv = R(1) / R(static_cast<double>(size));
  for (auto& c : fa) c *= inv;
  return fa;
}

}  // namespace

template <class R>
HomForm<R> form_multiply(const HomForm<R>& a, const HomForm<R>& b) {
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  if constexpr (std::is_same_v<R, Quad>) {
    if (std::min(ca.size(), cb.size()) > kFftThreshold) return HomForm<R>(fft_convolve<R>(ca, cb));
  }
  std::vector<Complex<R>> out(ca.size() + cb.size() - 1, Complex<R>(0));
  for (std::size_t i = 0; i < ca.size(); ++i) {
    const Complex<R> ai = ca[i];
    if (ai == Complex<R>(0)) continue;
    Complex<R>* dst = out.data() + i;
    for (std::size_t j = 0; j < cb.size(); ++j) dst[j] += ai * cb[j];
  }
  return HomForm<R>(std::move(out));  // rejects overflowed coefficients
}

template <class R>
R division_residual(const HomForm<R>& num, const HomForm<R>& den, const HomForm<R>& q) {
  const HomForm<R> back = form_multiply(q, den);
  R worst(0);
  using std::abs;
  for (std::size_t i = 0; i < back.coeffs().size(); ++i) {
    R r = abs(num[i] - back[i]);
    if (r > worst) worst = r;
  }
  const R scale = num.norm_inf();
  return scale == R(0) ? worst : worst / scale;
}

namespace {

// Unitary rotation [[c, s], [-conj(s), c]] with real c, zeroing `b`
// against `a`.
template <class R>
struct Givens {
  R c;
  Complex<R> s;
};

template <class R>
Givens<R> make_givens(const Complex<R>& a, const Complex<R>& b) {
  using std::abs;
  using std::sqrt;
  const R aa = abs(a);
  if (aa == R(0)) return {R(0), Complex<R>(1)};  // plain swap (up to phase)
  const R bb = abs(b);
  const R scale = aa > bb ? aa : bb;
  const R ra = aa / scale;
  const R rb = bb / scale;
  const R norm = scale * sqrt(ra * ra + rb * rb);
  return {aa / norm, (a / aa) * std::conj(b) / norm};
}

}  // namespace

namespace {

// Quotient by pointwise division on a slightly rotated circle of roots of
// unity; the rotation keeps nodes off roots of den lying on |z| = 1.
template <class R>
std::vector<Complex<R>> fft_quotient(const HomForm<R>& num, const HomForm<R>& den, std::size_t ncols) {
  const std::size_t size = fft_size(num.coeffs().size());
  const R theta = R(2) * std::numbers::pi_v<double> * R(0.381966011250105) / R(static_cast<double>(size));
  auto sampled = [&](std::span<const Complex<R>> c) {
    std::vector<Complex<R>> v(size, Complex<R>(0));
    for (std::size_t k = 0; k < c.size(); ++k) v[k] = c[k] * std::polar(R(1), theta * R(static_cast<double>(k)));
    detail::dft(v, -1);
    return v;
  };
  std::vector<Complex<R>> vn = sampled(num.coeffs());
  const std::vector<Complex<R>> vd = sampled(den.coeffs());
  for (std::size_t j = 0; j < size; ++j) {
    if (vd[j] == Complex<R>(0)) return {};
    vn[j] /= vd[j];
  }
  detail::dft(vn, +1);
  vn.resize(ncols);
  const R inv = R(1) / R(static_cast<double>(size));
  for (std::size_t k = 0; k < ncols; ++k) vn[k] *= inv * std::polar(R(1), -theta * R(static_cast<double>(k)));
  return vn;
}

}  // namespace

template <class R>
HomForm<R> form_exact_divide(const HomForm<R>& num, const HomForm<R>& den, double tol) {
  if (den.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by the zero form");
  const int n_deg = num.degree();
  const int m = den.degree();
  if (n_deg < m) throw Error(ErrorKind::NotDivisible, "numerator degree below denominator degree");
  const int qdeg = n_deg - m;
  if constexpr (std::is_same_v<R, Quad>) {
    if (static_cast<std::size_t>(qdeg) > kFftThreshold && m > 0) {
      auto q = fft_quotient(num, den, static_cast<std::size_t>(qdeg) + 1);
      if (!q.empty()) {
        HomForm<R> quotient(std::move(q));
        if (division_residual(num, den, quotient) <= R(tol)) return quotient;
      }
    }
  }
  const std::size_t width = static_cast<std::size_t>(m) + 1;
  const std::size_t ncols = static_cast<std::size_t>(qdeg) + 1;

  // Upper-triangular factor with upper bandwidth m, one row per unknown.
  std::vector<Complex<R>> rmat(ncols * width, Complex<R>(0));
  std::vector<Complex<R>> rhs(ncols, Complex<R>(0));
  std::vector<char> filled(ncols, 0);
  std::vector<Complex<R>> w(width);

  // Rows of the convolution matrix are fed one at a time and folded into
  // the factor with Givens rotations.
  for (int i = 0; i <= n_deg; ++i) {
    int start = std::max(0, i - m);
    if (start > qdeg) break;  // remaining rows only touch the residual
    std::fill(w.begin(), w.end(), Complex<R>(0));
    for (int j = start; j <= std::min(qdeg, i); ++j)
      w[static_cast<std::size_t>(j - start)] = den[static_cast<std::size_t>(i - j)];
    Complex<R> beta = num[static_cast<std::size_t>(i)];

    while (start <= qdeg) {
      const std::size_t col = static_cast<std::size_t>(start);
      Complex<R>* row = rmat.data() + col * width;
      if (w[0] != Complex<R>(0)) {
        if (!filled[col]) {
          std::copy(w.begin(), w.end(), row);
          rhs[col] = beta;
          filled[col] = 1;
          break;
        }
        const Givens<R> g = make_givens(row[0], w[0]);
        for (std::size_t k = 0; k < width; ++k) {
          const Complex<R> r = row[k];
          const Complex<R> v = w[k];
          row[k] = g.c * r + g.s * v;
          w[k] = -std::conj(g.s) * r + g.c * v;
        }
        const Complex<R> rb = rhs[col];
        rhs[col] = g.c * rb + g.s * beta;
        beta = -std::conj(g.s) * rb + g.c * beta;
      }
      std::rotate(w.begin(), w.begin() + 1, w.end());
      w.back() = Complex<R>(0);
      ++start;
    }
  }

  std::vector<Complex<R>> q(ncols, Complex<R>(0));
  for (int k = qdeg; k >= 0; --k) {
    const std::size_t kk = static_cast<std::size_t>(k);
    const Complex<R>* row = rmat.data() + kk * width;
    if (!filled[kk] || row[0] == Complex<R>(0))
      throw Error(ErrorKind::NotDivisible, "rank-deficient division system");
    Complex<R> acc = rhs[kk];
    for (std::size_t j = 1; j < width && kk + j < ncols; ++j) acc -= row[j] * q[kk + j];
    q[kk] = acc / row[0];
  }

  HomForm<R> quotient(std::move(q));
  const R res = division_residual(num, den, quotient);
  if (!(res <= R(tol))) {
    throw Error(ErrorKind::NotDivisible,
                "residual " + std::to_string(static_cast<double>(res)) + " exceeds tolerance");
  }
  return quotient;
}

namespace {

template <class R>
Complex<R> sylvester_determinant(std::span<const Complex<R>> p, std::span<const Complex<R>> q) {
  // p, q ascending coefficient lists of formal degrees dp, dq.
  const int dp = static_cast<int>(p.size()) - 1;
  const int dq = static_cast<int>(q.size()) - 1;
  const int size = dp + dq;
  if (size == 0) return Complex<R>(1);
  std::vector<Complex<R>> a(static_cast<std::size_t>(size * size), Complex<R>(0));
  auto at = [&](int r, int c) -> Complex<R>& { return a[static_cast<std::size_t>(r * size + c)]; };
  for (int r = 0; r < dq; ++r)
    for (int k = 0; k <= dp; ++k) at(r, r + k) = p[static_cast<std::size_t>(dp - k)];
  for (int r = 0; r < dp; ++r)
    for (int k = 0; k <= dq; ++k) at(dq + r, r + k) = q[static_cast<std::size_t>(dq - k)];

  using std::abs;
  Complex<R> det(1);
  for (int c = 0; c < size; ++c) {
    int piv = c;
    R best = abs(at(c, c));
    for (int r = c + 1; r < size; ++r) {
      R v = abs(at(r, c));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == R(0)) return Complex<R>(0);
    if (piv != c) {
      for (int k = 0; k < size; ++k) std::swap(at(c, k), at(piv, k));
      det = -det;
    }
    const Complex<R> pivot = at(c, c);
    det *= pivot;
    for (int r = c + 1; r < size; ++r) {
      const Complex<R> factor = at(r, c) / pivot;
      if (factor == Complex<R>(0)) continue;
      for (int k = c; k < size; ++k) at(r, k) -= factor * at(c, k);
    }
  }
  return det;
}

}  // namespace

template <class R>
Complex<R> resultant(const Poly<R>& p, const Poly<R>& q) {
  if (p.is_zero() || q.is_zero()) throw Error(ErrorKind::InvalidArgument, "resultant of the zero polynomial");
  return sylvester_determinant<R>(p.coeffs(), q.coeffs());
}

template <class R>
Complex<R> form_resultant(const HomForm<R>& a, const HomForm<R>& b) {
  return sylvester_determinant<R>(a.coeffs(), b.coeffs());
}

namespace {

struct TwoTerm {
  double hi;
  double lo;
};

inline TwoTerm two_sum(double a, double b) {
  const double s = a + b;
  const double z = s - a;
  return {s, (a - (s - z)) + (b - z)};
}

inline TwoTerm two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace

Cplx eval_compensated(const Poly<double>& p, const Cplx& z) {
  if (p.is_zero()) return Cplx(0);
  const auto c = p.coeffs();
  const double xr = z.real();
  const double xi = z.imag();
  double sr = c.back().real();
  double si = c.back().imag();
  double er = 0.0;
  double ei = 0.0;
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    // (sr + i si) * (xr + i xi) split into a product and three error terms
    const TwoTerm t1 = two_prod(sr, xr);
    const TwoTerm t2 = two_prod(si, xi);
    const TwoTerm t3 = two_prod(sr, xi);
    const TwoTerm t4 = two_prod(si, xr);
    const TwoTerm t5 = two_sum(t1.hi, -t2.hi);
    const TwoTerm t6 = two_sum(t3.hi, t4.hi);
    const TwoTerm s1 = two_sum(t5.hi, c[k].real());
    const TwoTerm s2 = two_sum(t6.hi, c[k].imag());
    const double local_r = t1.lo - t2.lo + t5.lo + s1.lo;
    const double local_i = t3.lo + t4.lo + t6.lo + s2.lo;
    const double nr = er * xr - ei * xi + local_r;
    const double ni = er * xi + ei * xr + local_i;
    er = nr;
    ei = ni;
    sr = s1.hi;
    si = s2.hi;
  }
  return Cplx(sr + er, si + ei);
}

#define MULTSPEC_INSTANTIATE(R)                                                                      \
  template class HomForm<R>;                                                                         \
  template HomForm<R> form_multiply(const HomForm<R>&, const HomForm<R>&);                           \
  template HomForm<R> form_exact_divide(const HomForm<R>&, const HomForm<R>&, double);               \
  template R division_residual(const HomForm<R>&, const HomForm<R>&, const HomForm<R>&);             \
  template Complex<R> resultant(const Poly<R>&, const Poly<R>&);                                     \
  template Complex<R> form_resultant(const HomForm<R>&, const HomForm<R>&);

MULTSPEC_INSTANTIATE(double)
MULTSPEC_INSTANTIATE(Quad)

#undef MULTSPEC_INSTANTIATE

}  // namespace multspec
