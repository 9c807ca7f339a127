#include "qnamp/twophoton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qnamp/constants.hpp"

namespace qnamp {

bool Mat2::finite() const {
  for (const cplx& z : {m11, m12, m21, m22}) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

double Mat2::max_abs() const {
  return std::max({std::abs(m11), std::abs(m12), std::abs(m21), std::abs(m22)});
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
          a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}

Mat2 operator*(cplx s, const Mat2& a) { return {s * a.m11, s * a.m12, s * a.m21, s * a.m22}; }

Mat2 operator+(const Mat2& a, const Mat2& b) {
  return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
}

Vec2 operator*(const Mat2& a, const Vec2& v) {
  return {a.m11 * v.q1 + a.m12 * v.q2, a.m21 * v.q1 + a.m22 * v.q2};
}

Vec2 operator*(cplx s, const Vec2& v) { return {s * v.q1, s * v.q2}; }

Mat2 hermitian_sqrt(const Mat2& h) {
  // For a 2x2 PSD matrix: sqrt(H) = (H + sqrt(det H) I) / sqrt(tr H + 2 sqrt(det H)).
  const double a = h.m11.real();
  const double d = h.m22.real();
  const cplx b = 0.5 * (h.m12 + std::conj(h.m21));
  const double det = std::max(0.0, a * d - std::norm(b));
  const double s = std::sqrt(det);
  const double tr = a + d + 2.0 * s;
  if (tr <= 0.0) return Mat2::zero();
  const double inv = 1.0 / std::sqrt(tr);
  return {inv * (a + s), inv * b, inv * std::conj(b), inv * (d + s)};
}

Mat2 loss_vacuum_coupling(const Mat2& m) { return hermitian_sqrt(Mat2::identity() - m * m.adjoint()); }

FrequencyGrid::FrequencyGrid(std::vector<double> hz) : hz_(std::move(hz)) {
  for (std::size_t i = 0; i < hz_.size(); ++i) {
    if (!std::isfinite(hz_[i]) || hz_[i] <= 0.0) {
      throw std::invalid_argument("frequency grid: points must be finite and > 0");
    }
    if (i > 0 && !(hz_[i] > hz_[i - 1])) {
      throw std::invalid_argument("frequency grid: points must be strictly increasing");
    }
  }
}

FrequencyGrid FrequencyGrid::log_spaced(double f_lo, double f_hi, std::size_t n) {
  if (!(f_lo > 0.0) || !(f_hi > f_lo) || n < 2) {
    throw std::invalid_argument("frequency grid: need 0 < f_lo < f_hi and n >= 2");
  }
  std::vector<double> hz(n);
  const double step = std::log(f_hi / f_lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) hz[i] = f_lo * std::exp(step * static_cast<double>(i));
  hz.front() = f_lo;
  hz.back() = f_hi;
  return FrequencyGrid(std::move(hz));
}

double FrequencyGrid::omega(std::size_t i) const { return constants::two_pi * hz_[i]; }

QuadratureTransfer::QuadratureTransfer(FrequencyGrid grid, std::vector<Mat2> m, std::string label)
    : grid_(std::move(grid)), m_(std::move(m)), label_(std::move(label)) {
  if (m_.size() != grid_.size()) {
    throw std::invalid_argument("quadrature transfer: matrix count does not match grid");
  }
  for (const Mat2& x : m_) {
    if (!x.finite()) throw std::invalid_argument("quadrature transfer '" + label_ + "': non-finite entry");
  }
}

QuadratureTransfer QuadratureTransfer::from_function(const FrequencyGrid& grid,
                                                     const std::function<Mat2(double)>& fn,
                                                     std::string label) {
  std::vector<Mat2> m(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) m[i] = fn(grid.omega(i));
  return {grid, std::move(m), std::move(label)};
}

QuadratureTransfer QuadratureTransfer::constant(const FrequencyGrid& grid, const Mat2& m,
                                                std::string label) {
  return {grid, std::vector<Mat2>(grid.size(), m), std::move(label)};
}

Mat2 rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c, -s, s, c};
}

Mat2 squeeze(double db, double angle) {
  if (db < 0.0) throw std::invalid_argument("squeeze: level must be >= 0 dB");
  const double s = std::pow(10.0, -db / 20.0);
  return rotation(angle) * Mat2::diagonal(s, 1.0 / s) * rotation(-angle);
}

double homodyne_psd(double zeta, const Mat2& m) {
  const double c = std::cos(zeta);
  const double s = std::sin(zeta);
  return std::norm(c * m.m11 + s * m.m21) + std::norm(c * m.m12 + s * m.m22);
}

cplx homodyne_gain(double zeta, const Vec2& sig) { return std::cos(zeta) * sig.q1 + std::sin(zeta) * sig.q2; }

QuadratureTransfer compose(const QuadratureTransfer& a, const QuadratureTransfer& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("compose: frequency grids differ");
  std::vector<Mat2> m(a.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = a.at(i) * b.at(i);
  return {a.grid(), std::move(m), a.label().empty() ? b.label() : a.label()};
}

QuadratureTransfer rotation(const FrequencyGrid& grid, double theta) {
  return QuadratureTransfer::constant(grid, rotation(theta), "rotation");
}

QuadratureTransfer squeeze(const FrequencyGrid& grid, double db, double angle) {
  return QuadratureTransfer::constant(grid, squeeze(db, angle), "squeeze");
}

NoiseSet propagate(const NoiseSet& paths, const QuadratureTransfer& m) {
  NoiseSet out;
  out.reserve(paths.size());
  for (const NoisePath& p : paths) {
    out.push_back({p.label, p.input_psd, compose(m, p.transfer), p.coupling});
  }
  return out;
}

NoisePath vacuum_path(const FrequencyGrid& grid, std::string label, const Mat2& coupling) {
  return {std::move(label), std::vector<double>(grid.size(), 1.0),
          QuadratureTransfer::constant(grid, Mat2::identity()), coupling};
}

namespace {

void check_loss(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("loss fraction must lie in [0, 1)");
}

}  // namespace

NoiseSet loss_channel(const NoiseSet& paths, double eps, const FrequencyGrid& grid,
                      const std::string& label) {
  check_loss(eps);
  const auto scale = QuadratureTransfer::constant(grid, std::sqrt(1.0 - eps) * Mat2::identity());
  NoiseSet out = propagate(paths, scale);
  if (eps > 0.0) out.push_back(vacuum_path(grid, label, std::sqrt(eps) * Mat2::identity()));
  return out;
}

NoiseSet additive_loss(const NoiseSet& paths, double eps, const FrequencyGrid& grid,
                       const std::string& label) {
  check_loss(eps);
  NoiseSet out = paths;
  if (eps > 0.0) out.push_back(vacuum_path(grid, label, std::sqrt(eps) * Mat2::identity()));
  return out;
}

HomodyneResult homodyne(const HomodyneAngle& zeta, const NoiseSet& paths, const SignalPath& sig) {
  const std::size_t n = sig.grid.size();
  if (zeta.size() != n || sig.transfer.size() != n) {
    throw std::invalid_argument("homodyne: inconsistent grid sizes");
  }
  HomodyneResult r{std::vector<double>(n, 0.0), std::vector<cplx>(n)};
  for (const NoisePath& p : paths) {
    if (!(p.transfer.grid() == sig.grid)) throw std::invalid_argument("homodyne: noise path grid differs");
    for (std::size_t i = 0; i < n; ++i) {
      r.noise_psd[i] += p.input_psd[i] * homodyne_psd(zeta[i], p.effective(i));
    }
  }
  for (std::size_t i = 0; i < n; ++i) r.signal_gain[i] = homodyne_gain(zeta[i], sig.transfer[i]);
  return r;
}

StrainAsd signal_referred(const std::vector<double>& noise_psd, const std::vector<cplx>& signal_gain,
                          double normalization) {
  if (noise_psd.size() != signal_gain.size()) {
    throw std::invalid_argument("signal_referred: size mismatch");
  }
  StrainAsd out{std::vector<double>(noise_psd.size()), std::vector<bool>(noise_psd.size(), false)};
  for (std::size_t i = 0; i < noise_psd.size(); ++i) {
    const double g = std::abs(signal_gain[i]);
    if (g == 0.0 || !std::isfinite(g)) {
      out.asd[i] = std::numeric_limits<double>::infinity();
      out.flagged[i] = true;
      continue;
    }
    out.asd[i] = normalization * std::sqrt(noise_psd[i]) / g;
  }
  return out;
}

}  // namespace qnamp
