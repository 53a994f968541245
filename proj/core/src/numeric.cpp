#include "ptdoublet/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "ptdoublet/error.hpp"

extern "C" {
void zhseqr_(const char* job, const char* compz, const int* n, const int* ilo, const int* ihi,
             std::complex<double>* h, const int* ldh, std::complex<double>* w, std::complex<double>* z,
             const int* ldz, std::complex<double>* work, const int* lwork, int* info, std::size_t job_len,
             std::size_t compz_len);
void zgttrf_(const int* n, std::complex<double>* dl, std::complex<double>* d, std::complex<double>* du,
             std::complex<double>* du2, int* ipiv, int* info);
void zgttrs_(const char* trans, const int* n, const int* nrhs, const std::complex<double>* dl,
             const std::complex<double>* d, const std::complex<double>* du, const std::complex<double>* du2,
             const int* ipiv, std::complex<double>* b, const int* ldb, int* info, std::size_t trans_len);
}

namespace ptdoublet {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

// LU factorization of (m - shift I) with partial pivoting.
class ShiftedLU {
 public:
  ShiftedLU(const Tridiagonal& m, cplx shift)
      : n_(static_cast<int>(m.size())), dl_(m.sub), d_(m.diag), du_(m.super), du2_(m.size()), ipiv_(m.size()) {
    for (cplx& v : d_) v -= shift;
    int info = 0;
    zgttrf_(&n_, dl_.data(), d_.data(), du_.data(), du2_.data(), ipiv_.data(), &info);
    if (info < 0) fail(ErrorCode::BadParameters, "zgttrf rejected its arguments");
    singular_ = info > 0;
  }

  bool singular() const noexcept { return singular_; }

  // Solves (m - shift) x = b, or the transposed system when `transpose`.
  void solve(std::vector<cplx>& b, bool transpose = false) const {
    const int nrhs = 1;
    int info = 0;
    zgttrs_(transpose ? "T" : "N", &n_, &nrhs, dl_.data(), d_.data(), du_.data(), du2_.data(), ipiv_.data(), b.data(), &n_,
            &info, 1);
    if (info != 0) fail(ErrorCode::BadParameters, "zgttrs rejected its arguments");
  }

 private:
  int n_;
  std::vector<cplx> dl_, d_, du_, du2_;
  std::vector<int> ipiv_;
  bool singular_ = false;
};

void normalize_max(std::vector<cplx>& x) {
  double peak = 0.0;
  std::size_t at = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > peak) {
      peak = std::abs(x[i]);
      at = i;
    }
  }
  if (peak == 0.0 || !std::isfinite(peak)) return;
  // Fix the phase too, so repeated runs give identical vectors.
  const cplx scale = 1.0 / x[at];
  for (cplx& v : x) v *= scale;
}

std::vector<cplx> start_vector(std::size_t n) {
  std::mt19937_64 rng(20011);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> x(n);
  for (cplx& v : x) v = cplx(1.0 + 0.5 * u(rng), 0.5 * u(rng));
  return x;
}

// x^H A x / x^H x. The bilinear form x^T W A x / x^T W x would be exact for the
// complex-symmetric pencil, but x^T W x is tiny for states concentrated high
// on the arch, which makes it far noisier than the plain quotient.
cplx quotient(const Tridiagonal& m, const std::vector<cplx>& x) {
  const std::vector<cplx> ax = m.apply(x);
  cplx num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += std::conj(x[i]) * ax[i];
    den += std::norm(x[i]);
  }
  return num / den;
}

// ||x|| ||y|| / |y^T x|, at least 1.
double condition_estimate(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  double nx = 0.0, ny = 0.0;
  cplx dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    nx += std::norm(x[i]);
    ny += std::norm(y[i]);
    dot += y[i] * x[i];
  }
  const double k = std::sqrt(nx * ny) / std::abs(dot);
  return std::isfinite(k) ? std::max(k, 1.0) : std::numeric_limits<double>::infinity();
}

struct OdeState {
  cplx psi, dpsi;
};

OdeState rhs(const ModelFunctions& m, cplx energy, cplx t, const OdeState& y) {
  const cplx st = m.ds_dt(t);
  const cplx stt = m.d2s_dt2(t);
  return {y.dpsi, (stt / st) * y.dpsi + st * st * (m.potential(t) - energy) * y.psi};
}

// RK4 from t0 along t0 + k*step, returning all steps+1 states.
std::vector<OdeState> integrate(const ModelFunctions& m, cplx energy, cplx t0, cplx step, int steps,
                                OdeState y) {
  std::vector<OdeState> out;
  out.reserve(steps + 1);
  out.push_back(y);
  cplx t = t0;
  for (int s = 0; s < steps; ++s) {
    const OdeState k1 = rhs(m, energy, t, y);
    const OdeState y2{y.psi + 0.5 * step * k1.psi, y.dpsi + 0.5 * step * k1.dpsi};
    const OdeState k2 = rhs(m, energy, t + 0.5 * step, y2);
    const OdeState y3{y.psi + 0.5 * step * k2.psi, y.dpsi + 0.5 * step * k2.dpsi};
    const OdeState k3 = rhs(m, energy, t + 0.5 * step, y3);
    const OdeState y4{y.psi + step * k3.psi, y.dpsi + step * k3.dpsi};
    const OdeState k4 = rhs(m, energy, t + step, y4);
    y.psi += step / 6.0 * (k1.psi + 2.0 * k2.psi + 2.0 * k3.psi + k4.psi);
    y.dpsi += step / 6.0 * (k1.dpsi + 2.0 * k2.dpsi + 2.0 * k3.dpsi + k4.dpsi);
    t += step;
    out.push_back(y);
  }
  return out;
}

}  // namespace

std::vector<cplx> Tridiagonal::apply(const std::vector<cplx>& x) const {
  const std::size_t n = diag.size();
  std::vector<cplx> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx v = diag[i] * x[i];
    if (i > 0) v += sub[i - 1] * x[i - 1];
    if (i + 1 < n) v += super[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

ModelFunctions eckart_model(const EckartParams& p, const EpsilonProfile& profile) {
  ModelFunctions m;
  m.potential = [p, profile](cplx t) { return v_eckart(r_of_t(t, profile), p); };
  m.ds_dt = [profile](cplx t) { return dr_dt(t, profile); };
  m.d2s_dt2 = [profile](cplx t) { return d2r_dt2(t, profile); };
  return m;
}

ModelFunctions natanzon_model(const NatanzonParams& p, const EpsilonProfile& profile) {
  ModelFunctions m;
  m.potential = [p, profile](cplx t) { return v_natanzon_in_r(r_of_t(t, profile), p); };
  m.ds_dt = [profile](cplx t) { return dxi_dr(r_of_t(t, profile)) * dr_dt(t, profile); };
  m.d2s_dt2 = [profile](cplx t) {
    const cplx r = r_of_t(t, profile);
    const cplx rt = dr_dt(t, profile);
    return d2xi_dr2(r) * rt * rt + dxi_dr(r) * d2r_dt2(t, profile);
  };
  return m;
}

DiscreteOperator discretize(const GridPtr& grid, ModelKind kind, const ModelFunctions& model,
                            const std::vector<cplx>& potential_on_grid) {
  const ContourGrid& g = *grid;
  const std::size_t n = g.size();
  if (n < 64) {
    std::ostringstream msg;
    msg << "discretization needs at least 64 grid points, got " << n;
    fail(ErrorCode::BadParameters, msg.str());
  }
  if (potential_on_grid.size() != n) fail(ErrorCode::BadParameters, "potential size differs from grid");

  const double h = g.spacing();
  const std::size_t m = n - 2;
  DiscreteOperator op;
  op.grid = grid;
  op.kind = kind;
  op.model = model;
  op.matrix.diag.resize(m);
  op.matrix.sub.resize(m - 1);
  op.matrix.super.resize(m - 1);
  op.weights.resize(m);

  std::vector<cplx> mid(n - 1);  // 1/s_t at t_{j+1/2}
  for (std::size_t j = 0; j + 1 < n; ++j) mid[j] = 1.0 / model.ds_dt(cplx(0.5 * (g[j].t + g[j + 1].t)));
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + 1;
    const cplx st = model.ds_dt(cplx(g[j].t));
    const cplx v = potential_on_grid[j];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || !std::isfinite(std::abs(st))) {
      fail(ErrorCode::SingularPoint, "potential or metric not finite on the grid");
    }
    const cplx lo = mid[j - 1], hi = mid[j];
    op.weights[i] = st;
    op.matrix.diag[i] = (lo + hi) / (h * h * st) + v;
    if (i > 0) op.matrix.sub[i - 1] = -lo / (h * h * st);
    if (i + 1 < m) op.matrix.super[i] = -hi / (h * h * st);
  }
  return op;
}

DiscreteOperator discretize(const GridPtr& grid, const EckartParams& p) {
  validate(p);
  const ModelFunctions model = eckart_model(p, grid->profile());
  std::vector<cplx> v(grid->size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = v_eckart((*grid)[k].r, p);
  return discretize(grid, ModelKind::Eckart, model, v);
}

DiscreteOperator discretize(const GridPtr& grid, const NatanzonParams& p) {
  const NatanzonPotential pot(p, grid);
  return discretize(grid, ModelKind::Natanzon, natanzon_model(p, grid->profile()), pot.values());
}

std::vector<cplx> eigen_all(const Tridiagonal& m, const DenseOptions& opt) {
  const std::size_t n = m.size();
  if (n == 0) return {};
  if (n > opt.cap) {
    std::ostringstream msg;
    msg << "dense eigensolve of size " << n << " exceeds the cap " << opt.cap << "; use eigen_near";
    fail(ErrorCode::DenseCapExceeded, msg.str());
  }
  // Column-major upper Hessenberg storage.
  std::vector<cplx> h(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    h[i + i * n] = m.diag[i];
    if (i + 1 < n) {
      h[(i + 1) + i * n] = m.sub[i];
      h[i + (i + 1) * n] = m.super[i];
    }
  }
  const int nn = static_cast<int>(n);
  const int ilo = 1, ihi = nn, ld = nn, ldz = 1;
  std::vector<cplx> w(n);
  cplx zdummy = 0.0;
  int info = 0;
  int lwork = -1;
  cplx query = 0.0;
  zhseqr_("E", "N", &nn, &ilo, &ihi, h.data(), &ld, w.data(), &zdummy, &ldz, &query, &lwork, &info, 1, 1);
  lwork = std::max<int>(static_cast<int>(query.real()), nn);
  std::vector<cplx> work(lwork);
  zhseqr_("E", "N", &nn, &ilo, &ihi, h.data(), &ld, w.data(), &zdummy, &ldz, work.data(), &lwork, &info, 1,
          1);
  if (info != 0) {
    std::ostringstream msg;
    msg << "Hessenberg QR did not converge (info=" << info << ")";
    fail(ErrorCode::NoConvergence, msg.str());
  }
  std::sort(w.begin(), w.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return w;
}

std::vector<cplx> eigen_all(const DiscreteOperator& op, const DenseOptions& opt) {
  return eigen_all(op.matrix, opt);
}

NearResult eigen_near(const Tridiagonal& m, cplx guess, const NearOptions& opt) {
  const std::size_t n = m.size();
  if (n == 0) fail(ErrorCode::BadParameters, "empty matrix");
  cplx shift = guess;
  auto lu = std::make_unique<ShiftedLU>(m, shift);
  if (lu->singular()) {
    shift = guess + 1e-9 * std::max(1.0, std::abs(guess)) * cplx(1.0, 1.0);
    lu = std::make_unique<ShiftedLU>(m, shift);
    if (lu->singular()) fail(ErrorCode::ShiftIsEigenvalue, "shift coincides with an eigenvalue");
  }

  // Successive quotients cannot agree better than rounding in A x allows.
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(m.diag[i]);
    if (i > 0) row += std::abs(m.sub[i - 1]);
    if (i + 1 < n) row += std::abs(m.super[i]);
    norm = std::max(norm, row);
  }
  const double floor = 100.0 * std::numeric_limits<double>::epsilon() * norm;

  NearResult res;
  std::vector<cplx> x = start_vector(n);
  // The left vector (A^T y = lambda y) gives the eigenvalue condition number,
  // which is what limits how well successive estimates can agree.
  std::vector<cplx> y = x;
  cplx prev = std::numeric_limits<double>::quiet_NaN();
  bool polishing = false;
  for (int it = 1; it <= opt.max_iter; ++it) {
    lu->solve(x);
    lu->solve(y, true);
    normalize_max(x);
    normalize_max(y);
    const cplx lambda = quotient(m, x);
    res.iterations = it;
    res.condition = condition_estimate(x, y);
    const double diff = std::abs(lambda - prev);
    const double change = diff / std::max(std::abs(lambda), 1.0);
    prev = lambda;
    if (change < opt.tol || diff < floor * res.condition) {
      res.value = lambda;
      res.converged = true;
      break;
    }
    if (change < opt.polish_after || polishing) {
      polishing = true;
      auto next = std::make_unique<ShiftedLU>(m, lambda);
      if (next->singular()) {
        res.value = lambda;
        res.converged = true;
        break;
      }
      lu = std::move(next);
    }
  }
  if (!res.converged) {
    std::ostringstream msg;
    msg << "inverse iteration near (" << guess.real() << ", " << guess.imag() << ") did not settle in "
        << opt.max_iter << " iterations";
    fail(ErrorCode::NoConvergence, msg.str());
  }
  res.vector = std::move(x);
  res.distance_from_guess = std::abs(res.value - guess);
  return res;
}

NearResult eigen_near(const DiscreteOperator& op, cplx guess, const NearOptions& opt) {
  return eigen_near(op.matrix, guess, opt);
}

std::vector<cplx> eigenvector(const Tridiagonal& m, cplx lambda, int sweeps) {
  const double nudge = 1e-10 * std::max(1.0, std::abs(lambda));
  auto lu = std::make_unique<ShiftedLU>(m, lambda + nudge);
  if (lu->singular()) lu = std::make_unique<ShiftedLU>(m, lambda + 1e3 * nudge);
  std::vector<cplx> x = start_vector(m.size());
  for (int s = 0; s < sweeps; ++s) {
    lu->solve(x);
    normalize_max(x);
  }
  return x;
}

ScannedLevel measure_vector(const DiscreteOperator& op, cplx energy, const std::vector<cplx>& vec,
                            const FilterOptions& filter) {
  const ContourGrid& g = *op.grid;
  const double T = std::max(std::abs(g.t_min()), std::abs(g.t_max()));
  double peak = 0.0, tail = 0.0, rough = 0.0;
  for (std::size_t i = 0; i < vec.size(); ++i) {
    const double a = std::abs(vec[i]);
    peak = std::max(peak, a);
    if (std::abs(g[i + 1].t) >= filter.tail_fraction * T) tail = std::max(tail, a);
    if (i > 0 && i + 1 < vec.size()) rough = std::max(rough, std::abs(vec[i + 1] - 2.0 * vec[i] + vec[i - 1]));
  }
  ScannedLevel lv;
  lv.energy = energy;
  lv.tail_ratio = peak > 0.0 ? tail / peak : 1.0;
  lv.roughness = peak > 0.0 ? rough / peak : 1.0;
  lv.kept = lv.tail_ratio < filter.tail_ratio && lv.roughness < filter.roughness;
  return lv;
}

SpectrumScan scan_spectrum(const DiscreteOperator& op, const FilterOptions& filter, const DenseOptions& dense) {
  SpectrumScan scan;
  scan.raw = eigen_all(op, dense);
  scan.levels.reserve(scan.raw.size());
  for (const cplx& lambda : scan.raw) {
    const std::vector<cplx> vec = eigenvector(op.matrix, lambda, 2);
    scan.levels.push_back(measure_vector(op, lambda, vec, filter));
    if (scan.levels.back().kept) scan.filtered.push_back(lambda);
  }
  return scan;
}

double eigenvector_winding(const DiscreteOperator& op, cplx energy, const std::vector<cplx>& vec,
                           const StripRect& rect, int vertical_steps, double resolved) {
  const ContourGrid& g = *op.grid;
  const std::size_t n = g.size();
  if (vec.size() + 2 != n) fail(ErrorCode::BadParameters, "eigenvector size does not match the grid");
  if (vertical_steps < 1) fail(ErrorCode::BadParameters, "need at least one vertical step");
  std::vector<cplx> psi(n, 0.0);
  std::copy(vec.begin(), vec.end(), psi.begin() + 1);

  std::size_t jlo = std::max<std::size_t>(g.index_near_t(g.t_min() + rect.margin), 2);
  std::size_t jhi = std::min(g.index_near_t(g.t_max() - rect.margin), n - 3);
  // Where |psi| has sunk to rounding noise its continuation is meaningless, so
  // the rectangle stops at the last resolved column on either side.
  double peak = 0.0;
  for (const cplx& v : psi) peak = std::max(peak, std::abs(v));
  const double cut = resolved * peak;
  while (jlo < jhi && std::abs(psi[jlo]) < cut) ++jlo;
  while (jhi > jlo && std::abs(psi[jhi]) < cut) --jhi;
  if (jlo >= jhi) fail(ErrorCode::BadParameters, "empty counting rectangle");
  const double h = g.spacing();

  const cplx down = cplx(0.0, -rect.below / vertical_steps);
  const cplx up = cplx(0.0, rect.above / vertical_steps);
  struct Node {
    cplx z;
    OdeState y;
  };
  std::vector<Node> bottom, top, left_down, left_up, right_down, right_up;
  for (std::size_t j = jlo; j <= jhi; ++j) {
    const cplx dpsi = (-psi[j + 2] + 8.0 * psi[j + 1] - 8.0 * psi[j - 1] + psi[j - 2]) / (12.0 * h);
    const OdeState y0{psi[j], dpsi};
    const cplx t0(g[j].t, 0.0);
    const auto yd = integrate(op.model, energy, t0, down, vertical_steps, y0);
    const auto yu = integrate(op.model, energy, t0, up, vertical_steps, y0);
    bottom.push_back({t0 + double(vertical_steps) * down, yd.back()});
    top.push_back({t0 + double(vertical_steps) * up, yu.back()});
    if (j == jlo || j == jhi) {
      auto& dst_d = j == jlo ? left_down : right_down;
      auto& dst_u = j == jlo ? left_up : right_up;
      for (int s = 0; s <= vertical_steps; ++s) {
        dst_d.push_back({t0 + double(s) * down, yd[s]});
        dst_u.push_back({t0 + double(s) * up, yu[s]});
      }
    }
  }

  // Counterclockwise: bottom left->right, right edge upward, top right->left, left edge downward.
  std::vector<Node> path(bottom.begin(), bottom.end());
  for (auto it = right_down.rbegin() + 1; it != right_down.rend(); ++it) path.push_back(*it);
  for (std::size_t s = 1; s < right_up.size(); ++s) path.push_back(right_up[s]);
  for (auto it = top.rbegin() + 1; it != top.rend(); ++it) path.push_back(*it);
  for (auto it = left_up.rbegin() + 1; it != left_up.rend(); ++it) path.push_back(*it);
  for (std::size_t s = 1; s < left_down.size(); ++s) path.push_back(left_down[s]);

  // Trapezoid of psi'/psi picks the sheet; the exact phase step then comes from
  // the ratio of neighbouring values.
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const cplx fa = path[k].y.dpsi / path[k].y.psi;
    const cplx fb = path[k + 1].y.dpsi / path[k + 1].y.psi;
    if (!std::isfinite(std::abs(fa)) || !std::isfinite(std::abs(fb))) {
      fail(ErrorCode::WindingNotInteger, "eigenfunction vanishes on the strip boundary");
    }
    const double estimate = (0.5 * (fa + fb) * (path[k + 1].z - path[k].z)).imag();
    double step = std::arg(path[k + 1].y.psi / path[k].y.psi);
    step += 2.0 * kPi * std::round((estimate - step) / (2.0 * kPi));
    total += step;
  }
  return total / (2.0 * kPi);
}

int eigenvector_node_count(const DiscreteOperator& op, cplx energy, const std::vector<cplx>& vec,
                           const StripRect& rect, int vertical_steps, double resolved) {
  const double w = eigenvector_winding(op, energy, vec, rect, vertical_steps, resolved);
  const double nearest = std::round(w);
  if (std::abs(w - nearest) > 0.1) {
    std::ostringstream msg;
    msg << "eigenvector winding " << w << " is not an integer";
    fail(ErrorCode::WindingNotInteger, msg.str());
  }
  return static_cast<int>(nearest);
}

cplx richardson(cplx coarse, cplx fine, double order, double ratio) {
  const double f = std::pow(ratio, order);
  return (f * fine - coarse) / (f - 1.0);
}

std::vector<EigenMatch> match_spectrum(const std::vector<cplx>& numeric, const std::vector<cplx>& analytic,
                                       double tol, const std::function<int(std::size_t)>& nodes) {
  std::vector<bool> used(numeric.size(), false);
  std::vector<EigenMatch> out;
  out.reserve(analytic.size());
  for (const cplx& a : analytic) {
    EigenMatch m;
    m.analytic_energy = a;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < numeric.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(numeric[i] - a);
      if (d < best) {
        best = d;
        m.numeric_index = i;
      }
    }
    if (std::isfinite(best)) {
      m.numeric_energy = numeric[m.numeric_index];
      m.relative_error = best / std::max(std::abs(a), 1.0);
      m.converged = true;
      m.matched = m.relative_error <= tol;
      if (m.matched) {
        used[m.numeric_index] = true;
        if (nodes) m.node_count = nodes(m.numeric_index);
      }
    } else {
      m.relative_error = std::numeric_limits<double>::infinity();
    }
    out.push_back(m);
  }
  return out;
}

Confirmation confirm_spectrum(const GridPtr& coarse, const OperatorFactory& make,
                              const std::vector<cplx>& analytic, const ConfirmOptions& opt) {
  Confirmation out;
  const DiscreteOperator op_c = make(coarse);
  out.kind = op_c.kind;
  out.n_coarse = coarse->size();
  const GridPtr fine = build_grid(coarse->profile(), coarse->t_min(), coarse->t_max(), opt.n_fine,
                                  GridOptions{coarse->safety_margin()});
  const DiscreteOperator op_f = make(fine);
  out.n_fine = fine->size();

  const SpectrumScan scan = scan_spectrum(op_c, opt.filter, opt.dense);
  out.raw = scan.raw;
  out.filtered = scan.filtered;
  std::vector<ScannedLevel> kept;
  for (const ScannedLevel& lv : scan.levels) {
    if (lv.kept && std::abs(lv.energy.imag()) <= opt.real_tol * std::max(std::abs(lv.energy), 1.0)) {
      kept.push_back(lv);
    }
  }

  std::vector<cplx> extrapolated;
  for (const ScannedLevel& lv : kept) {
    ConfirmedLevel c;
    const NearResult rc = eigen_near(op_c, lv.energy);
    c.coarse = rc.value;
    c.tail_ratio = lv.tail_ratio;
    // The fine run starts from the coarse numeric value only.
    c.fine = eigen_near(op_f, rc.value).value;
    c.extrapolated = richardson(c.coarse, c.fine);
    try {
      c.winding = eigenvector_winding(op_c, rc.value, rc.vector, opt.strip);
      const double nearest = std::round(c.winding);
      if (std::abs(c.winding - nearest) <= 0.1) c.node_count = static_cast<int>(nearest);
    } catch (const Error&) {
      c.winding = std::numeric_limits<double>::quiet_NaN();
    }
    out.levels.push_back(c);
    extrapolated.push_back(c.extrapolated);
  }

  out.matches = match_spectrum(extrapolated, analytic, opt.match_tol, [&](std::size_t i) {
    return out.levels[i].node_count.value_or(-1);
  });
  return out;
}

}  // namespace ptdoublet
