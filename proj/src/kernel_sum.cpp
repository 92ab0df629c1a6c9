#include "superres/kernel_sum.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

namespace superres {

namespace {

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

// parallel loop over [0, count); fn(i) must be pure. Results land in
// caller-owned slots, so scheduling cannot change them.
void parallel_for(long count, int threads, const std::function<void(long, long)>& range_fn) {
  if (threads <= 1 || count < 4096) {
    range_fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const long chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const long lo = t * chunk;
    const long hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(range_fn, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

KernelSumTable::KernelSumTable(const KernelBounds& kb, double tau_min, double eps, int m_max,
                               int threads)
    : tau_min_(tau_min), eps_(eps), m_max_(m_max) {
  if (!(tau_min > 0.0) || !(eps > 0.0) || m_max < 0)
    throw std::invalid_argument("KernelSumTable: bad parameters");
  if (m_max * eps > tau_min / 2.0 + 2.0 * eps)
    throw std::invalid_argument("KernelSumTable: tau range exceeds tau_min/2");
  build(kb, resolve_threads(threads));
}

void KernelSumTable::build(const KernelBounds& kb, int threads) {
  constexpr int kGridSpikes = 20;
  const long K = static_cast<long>(std::ceil(4.0 * tau_min_ / eps_ - 1e-9));
  const long W = std::min<long>(m_max_, K);  // suffix window

  for (int l = 0; l < 4; ++l) {
    hplus_[l].assign(m_max_ + 1, 0.0);
    hminus_[l].assign(m_max_ + 1, 0.0);
  }

  std::array<std::vector<double>, 4> win, left;
  for (int l = 0; l < 4; ++l) {
    win[l].resize(W + 1);
    left[l].resize(m_max_ + 1);
  }

  for (int j = 1; j <= kGridSpikes; ++j) {
    const double base = j * tau_min_;
    const double right_end = (j + 4) * tau_min_;

    // far part of the grid: k in (W, K], plus the clamped right endpoint
    std::vector<std::array<double, 4>> far_max(threads, {-1e300, -1e300, -1e300, -1e300});
    {
      const long count = K - W;
      std::vector<std::thread> pool;
      const long chunk = (count + threads - 1) / threads;
      for (int t = 0; t < threads; ++t) {
        const long lo = W + 1 + t * chunk;
        const long hi = std::min(K, lo + chunk - 1);
        if (lo > hi) break;
        pool.emplace_back([&, t, lo, hi]() {
          std::array<double, 4> mx = {-1e300, -1e300, -1e300, -1e300};
          double v[4];
          for (long k = lo; k <= hi; ++k) {
            const double u = std::min(base + k * eps_, right_end);
            kb.inf_scaled_all(u, eps_, v);
            for (int l = 0; l < 4; ++l) mx[l] = std::max(mx[l], v[l]);
          }
          far_max[t] = mx;
        });
      }
      for (auto& th : pool) th.join();
    }
    std::array<double, 4> rfar;
    for (int l = 0; l < 4; ++l) {
      double mx = -1e300;
      for (int t = 0; t < threads; ++t) mx = std::max(mx, far_max[t][l]);
      rfar[l] = mx;
    }
    {
      double v[4];
      kb.inf_scaled_all(right_end, eps_, v);  // clamped last point
      for (int l = 0; l < 4; ++l) rfar[l] = std::max(rfar[l], v[l]);
    }

    parallel_for(W + 1, threads, [&](long lo, long hi) {
      double v[4];
      for (long k = lo; k < hi; ++k) {
        const double u = std::min(base + k * eps_, right_end);
        kb.inf_scaled_all(u, eps_, v);
        for (int l = 0; l < 4; ++l) win[l][k] = v[l];
      }
    });
    parallel_for(m_max_ + 1, threads, [&](long lo, long hi) {
      double v[4];
      for (long m = std::max(lo, 1L); m < hi; ++m) {
        kb.inf_scaled_all(base - m * eps_, eps_, v);
        for (int l = 0; l < 4; ++l) left[l][m] = v[l];
      }
    });

    for (int l = 0; l < 4; ++l) {
      const double bj = kb.tail_any_scaled(right_end, l);
      // suffix maxima give the grids of H(-m eps)
      double run = rfar[l];
      for (long m = W; m >= 0; --m) {
        run = std::max(run, win[l][m]);
        hminus_[l][m] += std::max(run, bj);
      }
      if (W < m_max_)  // degenerate interval, grid collapses to the tail term
        for (long m = W + 1; m <= m_max_; ++m) hminus_[l][m] += std::max(rfar[l], bj);
      // prefix maxima over the left extension give H(+m eps)
      double whole = rfar[l];
      for (long k = 0; k <= W; ++k) whole = std::max(whole, win[l][k]);
      double runl = -1e300;
      hplus_[l][0] += std::max(whole, bj);
      for (long m = 1; m <= m_max_; ++m) {
        runl = std::max(runl, left[l][m]);
        hplus_[l][m] += std::max(std::max(runl, whole), bj);
      }
    }
  }

  for (int l = 0; l < 4; ++l) {
    const double resid = kb.tail_residual_scaled(l, tau_min_);
    for (long m = 0; m <= m_max_; ++m) {
      hplus_[l][m] += resid;
      hminus_[l][m] += resid;
    }
  }
}

double KernelSumTable::h_plus(int order, int m) const {
  if (order < 0 || order > 3 || m < 0 || m > m_max_)
    throw std::out_of_range("KernelSumTable::h_plus");
  return hplus_[order][m];
}

double KernelSumTable::h_minus(int order, int m) const {
  if (order < 0 || order > 3 || m < 0 || m > m_max_)
    throw std::out_of_range("KernelSumTable::h_minus");
  return hminus_[order][m];
}

double KernelSumTable::h(int order, double tau) const {
  if (tau >= 0.0) {
    int m = static_cast<int>(std::ceil(tau / eps_ - 1e-12));
    return h_plus(order, m);
  }
  int m = static_cast<int>(std::floor(-tau / eps_ + 1e-12));
  return h_minus(order, m);
}

namespace {

struct TableKey {
  std::vector<double> gamma;
  double f_min, eps, tau_min;
  bool operator<(const TableKey& o) const {
    if (gamma != o.gamma) return gamma < o.gamma;
    if (f_min != o.f_min) return f_min < o.f_min;
    if (eps != o.eps) return eps < o.eps;
    return tau_min < o.tau_min;
  }
};

std::map<TableKey, std::shared_ptr<const KernelSumTable>> g_tables;
std::mutex g_tables_mutex;

}  // namespace

std::shared_ptr<const KernelSumTable> kernel_sum_table(const KernelSpec& spec, double tau_min,
                                                       double eps, double tau_hi, int threads) {
  const int m_need = static_cast<int>(std::ceil(tau_hi / eps - 1e-12));
  TableKey key{spec.gamma, spec.f_min, eps, tau_min};
  {
    std::lock_guard<std::mutex> lock(g_tables_mutex);
    auto it = g_tables.find(key);
    if (it != g_tables.end() && it->second->m_max() >= m_need) return it->second;
  }
  KernelBounds kb(spec);
  auto table = std::make_shared<const KernelSumTable>(kb, tau_min, eps, m_need, threads);
  std::lock_guard<std::mutex> lock(g_tables_mutex);
  auto& slot = g_tables[key];
  if (!slot || slot->m_max() < m_need) slot = table;
  return slot;
}

double kernel_sum_bound(const KernelSpec& spec, double tau, double eps, int order,
                        double tau_min) {
  if (std::abs(tau) > tau_min / 2.0 + eps)
    throw std::invalid_argument("kernel_sum_bound: |tau| must be <= tau_min/2 + eps");
  auto table = kernel_sum_table(spec, tau_min, eps, std::abs(tau));
  return table->h(order, tau) * std::pow(spec.f_cut, order);
}

double grid_max_bound_inf(const KernelBounds& kb, double lo, double hi, double eps, int order,
                          int threads) {
  if (!(hi >= lo)) throw std::invalid_argument("grid_max_bound_inf: empty interval");
  const long K = static_cast<long>(std::ceil((hi - lo) / eps - 1e-9));
  const int nt = resolve_threads(threads);
  std::vector<double> mx(nt, -1e300);
  std::vector<std::thread> pool;
  const long chunk = (K + 1 + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const long a = t * chunk;
    const long b = std::min<long>(K, a + chunk - 1);
    if (a > b) break;
    pool.emplace_back([&, t, a, b]() {
      double m = -1e300;
      for (long k = a; k <= b; ++k)
        m = std::max(m, kb.inf_scaled(std::min(lo + k * eps, hi), eps, order));
      mx[t] = m;
    });
  }
  for (auto& th : pool) th.join();
  double m = kb.inf_scaled(hi, eps, order);
  for (double v : mx) m = std::max(m, v);
  return m;
}

}  // namespace superres
