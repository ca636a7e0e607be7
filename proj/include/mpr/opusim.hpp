#pragma once

#include "mpr/core.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace mpr {

/// Hidden complex M x N matrix of the simulated scattering medium. Entries are
/// N(0,1) + jN(0,1), i.e. unit variance per component.
struct TransmissionMatrix {
  ComplexMatrix a;
  std::uint64_t seed = 0;

  Index rows() const { return a.rows(); }
  Index cols() const { return a.cols(); }
};

TransmissionMatrix draw_transmission_matrix(Index rows, Index cols, std::uint64_t seed);

// Binary dump: u32 magic, u32 version, u64 M, u64 N, u64 seed, then M*N
// row-major (re, im) float64 pairs. Everything little-endian.
inline constexpr std::uint32_t kTransmissionMagic = 0x4152504dU;  // "MPRA"
inline constexpr std::uint32_t kTransmissionVersion = 1;

void save_transmission_matrix(const TransmissionMatrix& tm, std::ostream& out);
void save_transmission_matrix(const TransmissionMatrix& tm, const std::filesystem::path& path);
TransmissionMatrix load_transmission_matrix(std::istream& in);
TransmissionMatrix load_transmission_matrix(const std::filesystem::path& path);

struct CameraConfig {
  int bits = 8;
  /// Multiplier applied to |Ax|^2 before quantization.
  double exposure_gain = 1.0;
  /// Readings <= threshold are masked. nullopt disables masking entirely.
  std::optional<double> sensitivity_threshold = 0.0;
  bool binary_mode = false;
  /// false gives an ideal sensor that returns gain * |Ax|^2 unrounded and unclamped.
  bool quantize = true;
  /// Constant offset added before quantization (sensor dark level).
  double dark_level = 0.0;

  double max_level() const { return static_cast<double>((std::uint64_t{1} << bits) - 1); }
};

void validate_camera(const CameraConfig& cam);

/// Round half away from zero, then clamp to [0, 2^bits - 1].
double quantize_level(double scaled, int bits);

/// Intensities and masks for a batch of inputs, one column per input.
/// Masked intensities are zero.
struct IntensityRecord {
  Matrix intensities;  // M x batch
  Matrix mask;         // M x batch, 0/1
};

/// Applies the camera model (gain, dark level, quantizer, threshold) to raw
/// squared magnitudes.
IntensityRecord apply_camera(const Matrix& raw, const CameraConfig& cam);

/// Single-input forward model b = w .* (|Ax|^2 + noise).
IntensityRecord measure_intensity(const TransmissionMatrix& tm, const Vector& x,
                                  const CameraConfig& cam);

/// Raw |A X|^2 for a batch of real inputs (columns of `inputs`).
Matrix raw_intensity(const TransmissionMatrix& tm, const Matrix& inputs);

/// Fraction of readings at the top quantizer level.
double check_saturation(const Matrix& intensities, int bits);

/// Gain g such that the largest round(g * raw + dark) over all probes equals
/// target_max; found by bisection. Throws std::domain_error if every raw
/// intensity is zero.
double auto_exposure(const TransmissionMatrix& tm, const Matrix& probes, const CameraConfig& cam,
                     double target_max = 250.0);

/// Idealized additive quantization noise U(-h, h) with h = kappa / (2 (2^b - 1)).
class UniformQuantizationNoise {
 public:
  UniformQuantizationNoise(int bits, double kappa);

  double half_width() const { return half_width_; }
  double operator()(Rng& rng) const;

 private:
  double half_width_;
};

/// What the phase retrieval pipeline is allowed to see of a device: a batch
/// measurement plus camera metadata. Nothing about the transmission matrix.
class Opu {
 public:
  virtual ~Opu() = default;

  /// inputs: N x batch real matrix. Returns M x batch readings and masks.
  virtual IntensityRecord measure(const Matrix& inputs) const = 0;
  virtual Index input_dim() const = 0;
  virtual Index output_dim() const = 0;
  virtual int bits() const = 0;
  virtual std::optional<double> threshold() const = 0;
  virtual bool binary_mode() const = 0;
};

class SimulatedOpu final : public Opu {
 public:
  SimulatedOpu(TransmissionMatrix tm, CameraConfig cam);

  IntensityRecord measure(const Matrix& inputs) const override;
  Index input_dim() const override { return tm_.cols(); }
  Index output_dim() const override { return tm_.rows(); }
  int bits() const override { return cam_.bits; }
  std::optional<double> threshold() const override { return cam_.sensitivity_threshold; }
  bool binary_mode() const override { return cam_.binary_mode; }

  const CameraConfig& camera() const { return cam_; }
  void set_camera(const CameraConfig& cam);
  /// Ground truth for evaluation harnesses. Never handed to the solver.
  const TransmissionMatrix& transmission() const { return tm_; }

 private:
  TransmissionMatrix tm_;
  CameraConfig cam_;
};

}  // namespace mpr
