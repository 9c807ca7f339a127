#pragma once

// Two-photon (quadrature) field algebra.
//
// Quadrature amplitudes (a1, a2) are normalised so that the single-sided
// spectral density of each vacuum quadrature is exactly 1. A squeezed
// quadrature at X dB therefore has PSD 10^(-X/10), and classical noises must
// be expressed in the same quanta units before they are accumulated.

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace qnamp {

using cplx = std::complex<double>;

struct Vec2 {
  cplx q1{0.0};
  cplx q2{0.0};
};

/// 2x2 complex matrix acting on (amplitude, phase) quadrature pairs.
struct Mat2 {
  cplx m11{0.0}, m12{0.0}, m21{0.0}, m22{0.0};

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 zero() { return {}; }
  static Mat2 diagonal(cplx d1, cplx d2) { return {d1, 0.0, 0.0, d2}; }

  cplx det() const { return m11 * m22 - m12 * m21; }
  Mat2 adjoint() const {
    return {std::conj(m11), std::conj(m21), std::conj(m12), std::conj(m22)};
  }
  bool finite() const;
  /// Max-abs entry.
  double max_abs() const;
};

Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator*(cplx s, const Mat2& a);
Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator-(const Mat2& a, const Mat2& b);
Vec2 operator*(const Mat2& a, const Vec2& v);
Vec2 operator*(cplx s, const Vec2& v);

/// Principal square root of a Hermitian positive-semidefinite matrix.
/// Negative eigenvalues (round-off) are clamped to zero.
Mat2 hermitian_sqrt(const Mat2& h);

/// Vacuum-noise coupling that restores unit vacuum normalisation after a
/// contraction `m`: returns N with m m^dagger + N N^dagger = I.
Mat2 loss_vacuum_coupling(const Mat2& m);

/// Strictly increasing, positive, finite list of sideband frequencies in Hz.
class FrequencyGrid {
 public:
  FrequencyGrid() = default;
  explicit FrequencyGrid(std::vector<double> hz);

  static FrequencyGrid log_spaced(double f_lo, double f_hi, std::size_t n);

  std::size_t size() const { return hz_.size(); }
  bool empty() const { return hz_.empty(); }
  double hz(std::size_t i) const { return hz_[i]; }
  double omega(std::size_t i) const;
  const std::vector<double>& values() const { return hz_; }

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

 private:
  std::vector<double> hz_;
};

/// Frequency-indexed 2x2 transfer matrix.
class QuadratureTransfer {
 public:
  QuadratureTransfer(FrequencyGrid grid, std::vector<Mat2> m, std::string label = {});

  /// Evaluate `fn(Omega)` (rad/s) at each grid point.
  static QuadratureTransfer from_function(const FrequencyGrid& grid,
                                          const std::function<Mat2(double)>& fn,
                                          std::string label = {});
  static QuadratureTransfer constant(const FrequencyGrid& grid, const Mat2& m,
                                     std::string label = {});

  const FrequencyGrid& grid() const { return grid_; }
  const Mat2& at(std::size_t i) const { return m_[i]; }
  std::size_t size() const { return m_.size(); }
  const std::string& label() const { return label_; }

 private:
  FrequencyGrid grid_;
  std::vector<Mat2> m_;
  std::string label_;
};

/// A noise input entering through `coupling`, then `transfer`, to the
/// readout. Each of the two input quadratures is independent with spectral
/// density `input_psd` (quanta units; vacuum = 1).
struct NoisePath {
  std::string label;
  std::vector<double> input_psd;
  QuadratureTransfer transfer;
  Mat2 coupling = Mat2::identity();

  Mat2 effective(std::size_t i) const { return transfer.at(i) * coupling; }
};

using NoiseSet = std::vector<NoisePath>;

/// Maps strain h to output quadratures, per frequency.
struct SignalPath {
  FrequencyGrid grid;
  std::vector<Vec2> transfer;
};

/// Readout angle zeta(Omega), radians.
using HomodyneAngle = std::vector<double>;

struct HomodyneResult {
  std::vector<double> noise_psd;
  std::vector<cplx> signal_gain;
};

struct StrainAsd {
  std::vector<double> asd;
  std::vector<bool> flagged;  // signal gain vanished at this point
};

// --- point-level helpers ---------------------------------------------------

Mat2 rotation(double theta);
/// In the basis rotated by `angle`, amplitude gain 10^(-db/20) on the
/// squeezed quadrature and its inverse on the anti-squeezed one.
Mat2 squeeze(double db, double angle);

/// |v^T m|^2 summed over both input quadratures, v = (cos zeta, sin zeta).
double homodyne_psd(double zeta, const Mat2& m);
cplx homodyne_gain(double zeta, const Vec2& sig);

// --- grid-level operations -------------------------------------------------

/// Pointwise a*b (b applied first). Throws std::invalid_argument on grid
/// mismatch.
QuadratureTransfer compose(const QuadratureTransfer& a, const QuadratureTransfer& b);
QuadratureTransfer rotation(const FrequencyGrid& grid, double theta);
QuadratureTransfer squeeze(const FrequencyGrid& grid, double db, double angle);

/// Apply `m` after every path in the set.
NoiseSet propagate(const NoiseSet& paths, const QuadratureTransfer& m);

NoisePath vacuum_path(const FrequencyGrid& grid, std::string label,
                      const Mat2& coupling = Mat2::identity());

/// Beam-splitter loss: existing transfers scale by sqrt(1-eps), a unit vacuum
/// path with coupling sqrt(eps) is appended.
NoiseSet loss_channel(const NoiseSet& paths, double eps, const FrequencyGrid& grid,
                      const std::string& label = "loss");

/// Leading-order loss: transfers untouched, a vacuum path with coupling
/// sqrt(eps) is appended.
NoiseSet additive_loss(const NoiseSet& paths, double eps, const FrequencyGrid& grid,
                       const std::string& label = "loss");

HomodyneResult homodyne(const HomodyneAngle& zeta, const NoiseSet& paths,
                        const SignalPath& sig);

/// sqrt(noise PSD)/|signal gain| times `normalization`.
StrainAsd signal_referred(const std::vector<double>& noise_psd,
                          const std::vector<cplx>& signal_gain,
                          double normalization = 1.0);

}  // namespace qnamp
