#include "closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <tuple>

#include "hetfb/error.hpp"
#include "specfun_impl.hpp"

namespace hetfb::detail {

using mp::BigFloat;

namespace {

using Key = std::tuple<int, double, std::vector<double>>;

std::mutex g_table_mutex;
std::map<Key, std::shared_ptr<const ClosedFormTable>> g_tables;
constexpr std::size_t table_cache_limit = 4096;

Key key_of(const LinkProfile& p) { return {static_cast<int>(p.kind()), p.rho0(), p.interferers()}; }

void compositions(unsigned total, std::size_t parts, std::vector<unsigned>& cur, std::size_t pos,
                  const std::function<void(const std::vector<unsigned>&)>& visit) {
  if (pos + 1 == parts) {
    cur[pos] = total;
    visit(cur);
    return;
  }
  for (unsigned k = 0; k <= total; ++k) {
    cur[pos] = total - k;
    compositions(k, parts, cur, pos + 1, visit);
  }
}

// Mixture weights w_b = varpi_b d_b and poles d_b = rho0 / rho_b in extended precision.
void mixture(const LinkProfile& p, std::vector<BigFloat>& w, std::vector<BigFloat>& d) {
  const auto& rho = p.interferers();
  const std::size_t J = rho.size();
  const BigFloat rho0(p.rho0());
  w.assign(J, BigFloat(1.0));
  d.assign(J, BigFloat(0.0));
  for (std::size_t b = 0; b < J; ++b) {
    const BigFloat rb(rho[b]);
    d[b] = rho0 / rb;
    BigFloat varpi(1.0);
    for (std::size_t i = 0; i < J; ++i) {
      if (i == b) continue;
      varpi *= rb / (rb - BigFloat(rho[i]));
    }
    w[b] = varpi * d[b];
  }
}

std::vector<BigFloat> g_from_tail_integrals(const std::vector<BigFloat>& t, unsigned max_eps) {
  const BigFloat inv_ln2 = BigFloat(1.0) / mp::ln2_constant();
  std::vector<BigFloat> g(max_eps + 1);
  for (unsigned eps = 1; eps <= max_eps; ++eps) {
    BigFloat acc(0.0);
    BigFloat binom(1.0);  // C(eps-1, l)
    for (unsigned l = 0; l < eps; ++l) {
      if (l > 0) {
        binom *= BigFloat(static_cast<double>(eps - l));
        binom /= BigFloat(static_cast<double>(l));
      }
      BigFloat term = binom * t[l] / BigFloat(static_cast<double>(l + 1));
      if (l % 2 == 1) acc -= term;
      else acc += term;
    }
    g[eps] = acc * BigFloat(static_cast<double>(eps)) * inv_ln2;
  }
  return g;
}

}  // namespace

bool closed_form_supported(const LinkProfile& p) {
  return p.num_interferers() <= closed_form_interferer_limit;
}

double ClosedFormTable::max_rel_error() const {
  double e = 0.0;
  for (std::size_t i = 1; i < err_.size(); ++i) e = std::max(e, err_[i]);
  return e;
}

std::size_t j_vector_count(std::size_t J, unsigned power) {
  if (J == 0) return 0;
  // C(power + J - 1, J - 1)
  double c = 1.0;
  for (std::size_t i = 1; i < J; ++i) c = c * static_cast<double>(power + i) / static_cast<double>(i);
  return static_cast<std::size_t>(std::llround(c));
}

std::vector<std::vector<BigFloat>> power_coefficients_literal(const std::vector<BigFloat>& w,
                                                              const std::vector<BigFloat>& d, unsigned power) {
  const std::size_t J = w.size();
  std::vector<std::vector<BigFloat>> a(J, std::vector<BigFloat>(power, BigFloat(0.0)));
  std::vector<std::vector<BigFloat>> wpow(J, std::vector<BigFloat>(power + 1));
  for (std::size_t b = 0; b < J; ++b) {
    wpow[b][0] = BigFloat(1.0);
    for (unsigned k = 1; k <= power; ++k) wpow[b][k] = wpow[b][k - 1] * w[b];
  }
  std::vector<unsigned> cur(J);
  compositions(power, J, cur, 0, [&](const std::vector<unsigned>& j) {
    BigFloat coef(1.0);
    unsigned remaining = power;
    for (std::size_t b = 0; b < J; ++b) {
      coef *= binomial_real<BigFloat>(remaining, j[b]);
      remaining -= j[b];
      coef *= wpow[b][j[b]];
    }
    const auto psi = psi_coefficients_impl(d, j);
    for (std::size_t b = 0; b < J; ++b)
      for (unsigned i = 0; i < j[b]; ++i) a[b][i] += coef * psi[b][i];
  });
  return a;
}

std::vector<std::vector<BigFloat>> power_coefficients_step(const std::vector<std::vector<BigFloat>>& a,
                                                           const std::vector<BigFloat>& w,
                                                           const std::vector<BigFloat>& d) {
  const std::size_t J = w.size();
  const std::size_t len = a.empty() ? 0 : a[0].size();
  std::vector<std::vector<BigFloat>> next(J, std::vector<BigFloat>(len + 1, BigFloat(0.0)));
  for (std::size_t b = 0; b < J; ++b) {
    // Same pole: the order rises by one.
    for (std::size_t i = 0; i < len; ++i) next[b][i + 1] += a[b][i] * w[b];
    for (std::size_t c = 0; c < J; ++c) {
      if (c == b) continue;
      // 1/((x+d_b)^i (x+d_c)) = (-u)^i/(x+d_c) + sum_r u (-u)^(i-r)/(x+d_b)^r, u = 1/(d_c - d_b)
      const BigFloat u = BigFloat(1.0) / (d[c] - d[b]);
      const BigFloat neg_u = -u;
      BigFloat h(0.0);
      for (std::size_t r = len; r >= 1; --r) {
        h = a[b][r - 1] + neg_u * h;
        next[b][r - 1] += w[c] * u * h;
      }
      next[c][0] += w[c] * neg_u * h;
    }
  }
  return next;
}

std::vector<BigFloat> tail_power_integrals(const LinkProfile& p, unsigned count) {
  std::vector<BigFloat> t(count);
  const BigFloat rho0(p.rho0());
  switch (p.kind()) {
    case ProfileKind::noise_limited:
      for (unsigned l = 0; l < count; ++l) t[l] = exp_e1(BigFloat(static_cast<double>(l + 1)) / rho0);
      return t;
    case ProfileKind::interference_limited: {
      const BigFloat r = rho0 / BigFloat(p.interferers()[0]);
      const BigFloat z = BigFloat(1.0) - r;
      for (unsigned l = 0; l < count; ++l) {
        // r * Beta(1, l+1) * 2F1(1, 1; l+2; 1-r), Beta(1, l+1) = 1/(l+1)
        const BigFloat beta = BigFloat(1.0) / BigFloat(static_cast<double>(l + 1));
        t[l] = r * beta * hyp2f1_11_integer(l + 2, z);
      }
      return t;
    }
    case ProfileKind::general: break;
  }
  std::vector<BigFloat> w, d;
  mixture(p, w, d);
  const std::size_t J = w.size();
  std::vector<std::vector<BigFloat>> a;
  if (J > 2) {
    a.assign(J, std::vector<BigFloat>(1, BigFloat(0.0)));
    for (std::size_t b = 0; b < J; ++b) a[b][0] = w[b];
  }
  for (unsigned l = 0; l < count; ++l) {
    const unsigned power = l + 1;
    if (J <= 2) a = power_coefficients_literal(w, d, power);
    else if (l > 0) a = power_coefficients_step(a, w, d);
    const BigFloat alpha = BigFloat(static_cast<double>(power)) / rho0;
    BigFloat acc(0.0);
    for (std::size_t b = 0; b < J; ++b) {
      const std::vector<BigFloat> i1 = i1_table(alpha, d[b], power);
      for (unsigned i = 1; i <= power; ++i) acc += a[b][i - 1] * i1[i];
    }
    t[l] = acc;
  }
  return t;
}

std::shared_ptr<const ClosedFormTable> ClosedFormTable::get(const LinkProfile& p) {
  if (!closed_form_supported(p))
    fail(Errc::cancellation, "closed form is limited to at most 4 interferers; use quadrature");
  const Key key = key_of(p);
  {
    std::lock_guard<std::mutex> lock(g_table_mutex);
    auto it = g_tables.find(key);
    if (it != g_tables.end()) return it->second;
  }
  const unsigned L = closed_form_eps_limit;
  std::shared_ptr<ClosedFormTable> table(new ClosedFormTable());
  long bits = 320;
  for (;;) {
    std::vector<BigFloat> coarse, fine;
    {
      mp::PrecisionScope scope(bits);
      coarse = g_from_tail_integrals(tail_power_integrals(p, L), L);
    }
    mp::PrecisionScope scope(bits + 64);
    fine = g_from_tail_integrals(tail_power_integrals(p, L), L);
    std::vector<double> err(L + 1, 0.0);
    double worst = 0.0;
    for (unsigned e = 1; e <= L; ++e) {
      const BigFloat diff = abs(fine[e] - coarse[e]);
      const BigFloat mag = abs(fine[e]);
      double rel = mag.is_zero() ? (diff.is_zero() ? 0.0 : HUGE_VAL) : (diff / mag).to_double();
      if (!fine[e].is_finite()) rel = HUGE_VAL;
      err[e] = rel;
      worst = std::max(worst, rel);
    }
    if (worst <= target_rel_error || bits + 64 >= max_precision_bits) {
      table->g_ = std::move(fine);
      table->err_ = std::move(err);
      table->precision_ = bits + 64;
      break;
    }
    bits *= 2;
    if (bits + 64 > max_precision_bits) bits = max_precision_bits - 64;
  }
  std::size_t terms = 0;
  for (unsigned l = 0; l < L; ++l) terms += std::max<std::size_t>(1, j_vector_count(p.num_interferers(), l + 1));
  table->terms_ = terms;
  std::lock_guard<std::mutex> lock(g_table_mutex);
  if (g_tables.size() >= table_cache_limit) g_tables.clear();
  g_tables.emplace(key, table);
  return table;
}

}  // namespace hetfb::detail
