#include "multspec/dynatomic.hpp"

#include <string>
#include <type_traits>

namespace multspec {

int moebius_mu(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "moebius_mu needs n >= 1");
  int result = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  if (n > 1) result = -result;
  return result;
}

std::vector<int> divisors(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "divisors needs n >= 1");
  std::vector<int> out;
  for (int k = 1; k <= n; ++k)
    if (n % k == 0) out.push_back(k);
  return out;
}

std::int64_t nu_count(int d, int n) {
  if (d < 2 || n < 1) throw Error(ErrorKind::InvalidArgument, "nu_count needs d >= 2, n >= 1");
  std::int64_t total = 0;
  for (int k : divisors(n)) {
    const int mu = moebius_mu(n / k);
    if (mu == 0) continue;
    std::int64_t dk = 1;
    for (int i = 0; i < k; ++i) dk *= d;
    total += mu * (dk + 1);
  }
  return total;
}

namespace {

template <class R>
HomForm<R> period_form_from(const HomForm<R>& f, const HomForm<R>& g) {
  const std::size_t deg = static_cast<std::size_t>(f.degree());
  std::vector<Complex<R>> c(deg + 2, Complex<R>(0));
  for (std::size_t i = 0; i <= deg; ++i) {
    c[i] += f[i];
    c[i + 1] -= g[i];
  }
  return HomForm<R>(std::move(c)).normalized();
}

template <class R>
DynatomicForm<R> dynatomic_at(const RationalMap<R>& f, int n, double tol) {
  const auto iterates = iterate_forms_all(f, n);
  std::vector<HomForm<R>> plus, minus;
  for (int k : divisors(n)) {
    const int mu = moebius_mu(n / k);
    if (mu == 0) continue;
    const auto& [fk, gk] = iterates[static_cast<std::size_t>(k - 1)];
    (mu > 0 ? plus : minus).push_back(period_form_from(fk, gk));
  }
  auto product = [](const std::vector<HomForm<R>>& forms) {
    HomForm<R> acc = HomForm<R>::monomial(0, 0);
    for (const auto& p : forms) acc = form_multiply(acc, p).normalized();
    return acc;
  };
  HomForm<R> num = product(plus);
  HomForm<R> form = minus.empty() ? num : form_exact_divide(num, product(minus), tol).normalized();
  DynatomicForm<R> out{std::move(form), n, nu_count(f.degree(), n),
                       std::is_same_v<R, double> ? Precision::Double : Precision::Extended};
  if (out.form.degree() != out.nominal_degree)
    throw Error(ErrorKind::NotDivisible, "dynatomic degree mismatch");
  return out;
}

}  // namespace

template <class R>
PeriodForm<R> period_form(const RationalMap<R>& f, int n) {
  const auto [fn, gn] = iterate_forms(f, n);
  return PeriodForm<R>{period_form_from(fn, gn), n};
}

template <class R>
DynatomicForm<R> dynatomic_form(const RationalMap<R>& f, int n, double division_tol) {
  if constexpr (std::is_same_v<R, double>) {
    try {
      return dynatomic_at(f, n, division_tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotDivisible) throw;
      auto wide = dynatomic_at(convert<Quad>(f), n, division_tol);
      return DynatomicForm<double>{convert<double>(wide.form), n, wide.nominal_degree, Precision::Extended};
    }
  } else {
    return dynatomic_at(f, n, division_tol);
  }
}

template PeriodForm<double> period_form(const RationalMap<double>&, int);
template PeriodForm<Quad> period_form(const RationalMap<Quad>&, int);
template DynatomicForm<double> dynatomic_form(const RationalMap<double>&, int, double);
template DynatomicForm<Quad> dynatomic_form(const RationalMap<Quad>&, int, double);

}  // namespace multspec
