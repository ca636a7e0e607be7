#include "mpr/opusim.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mpr {

TransmissionMatrix draw_transmission_matrix(Index rows, Index cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("transmission matrix dimensions must be >= 1");
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  TransmissionMatrix tm;
  tm.seed = seed;
  tm.a.resize(rows, cols);
  // Row-major fill so a given (row, col) entry does not depend on the column count ordering.
  for (Index m = 0; m < rows; ++m)
    for (Index n = 0; n < cols; ++n) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      tm.a(m, n) = {re, im};
    }
  return tm;
}

namespace {

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!in) throw std::runtime_error("transmission matrix file is truncated");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace

void save_transmission_matrix(const TransmissionMatrix& tm, std::ostream& out) {
  write_le<std::uint32_t>(out, kTransmissionMagic);
  write_le<std::uint32_t>(out, kTransmissionVersion);
  write_le<std::uint64_t>(out, static_cast<std::uint64_t>(tm.rows()));
  write_le<std::uint64_t>(out, static_cast<std::uint64_t>(tm.cols()));
  write_le<std::uint64_t>(out, tm.seed);
  for (Index m = 0; m < tm.rows(); ++m)
    for (Index n = 0; n < tm.cols(); ++n) {
      write_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(tm.a(m, n).real()));
      write_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(tm.a(m, n).imag()));
    }
  if (!out) throw std::runtime_error("failed to write transmission matrix");
}

void save_transmission_matrix(const TransmissionMatrix& tm, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  save_transmission_matrix(tm, out);
}

TransmissionMatrix load_transmission_matrix(std::istream& in) {
  if (read_le<std::uint32_t>(in) != kTransmissionMagic)
    throw std::runtime_error("not a transmission matrix file (bad magic)");
  const auto version = read_le<std::uint32_t>(in);
  if (version != kTransmissionVersion)
    throw std::runtime_error("unsupported transmission matrix version " + std::to_string(version));
  const auto rows = read_le<std::uint64_t>(in);
  const auto cols = read_le<std::uint64_t>(in);
  TransmissionMatrix tm;
  tm.seed = read_le<std::uint64_t>(in);
  if (rows == 0 || cols == 0) throw std::runtime_error("transmission matrix file has zero dimension");
  tm.a.resize(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index m = 0; m < tm.rows(); ++m)
    for (Index n = 0; n < tm.cols(); ++n) {
      const double re = std::bit_cast<double>(read_le<std::uint64_t>(in));
      const double im = std::bit_cast<double>(read_le<std::uint64_t>(in));
      tm.a(m, n) = {re, im};
    }
  return tm;
}

TransmissionMatrix load_transmission_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_transmission_matrix(in);
}

void validate_camera(const CameraConfig& cam) {
  if (cam.bits < 1 || cam.bits > 32) throw std::invalid_argument("camera bits must be in [1, 32]");
  if (!(cam.exposure_gain > 0.0)) throw std::invalid_argument("exposure gain must be > 0");
  if (cam.sensitivity_threshold && *cam.sensitivity_threshold < 0.0)
    throw std::invalid_argument("sensitivity threshold must be >= 0");
}

double quantize_level(double scaled, int bits) {
  const double top = static_cast<double>((std::uint64_t{1} << bits) - 1);
  return std::clamp(std::round(scaled), 0.0, top);
}

IntensityRecord apply_camera(const Matrix& raw, const CameraConfig& cam) {
  validate_camera(cam);
  IntensityRecord rec;
  rec.intensities.resize(raw.rows(), raw.cols());
  rec.mask.resize(raw.rows(), raw.cols());
  for (Index c = 0; c < raw.cols(); ++c)
    for (Index m = 0; m < raw.rows(); ++m) {
      const double scaled = cam.exposure_gain * raw(m, c) + cam.dark_level;
      const double level = cam.quantize ? quantize_level(scaled, cam.bits) : scaled;
      const bool keep = !cam.sensitivity_threshold || level > *cam.sensitivity_threshold;
      rec.mask(m, c) = keep ? 1.0 : 0.0;
      rec.intensities(m, c) = keep ? level : 0.0;
    }
  return rec;
}

Matrix raw_intensity(const TransmissionMatrix& tm, const Matrix& inputs) {
  if (inputs.rows() != tm.cols())
    throw std::invalid_argument("input length " + std::to_string(inputs.rows()) +
                                " does not match transmission matrix width " +
                                std::to_string(tm.cols()));
  const Matrix re = tm.a.real() * inputs;
  const Matrix im = tm.a.imag() * inputs;
  return re.array().square() + im.array().square();
}

IntensityRecord measure_intensity(const TransmissionMatrix& tm, const Vector& x,
                                  const CameraConfig& cam) {
  if (cam.binary_mode && !is_binary(x))
    throw std::invalid_argument("binary mode: input must have entries in {0, 1}");
  return apply_camera(raw_intensity(tm, x), cam);
}

double check_saturation(const Matrix& intensities, int bits) {
  if (intensities.size() == 0) return 0.0;
  const double top = static_cast<double>((std::uint64_t{1} << bits) - 1);
  return static_cast<double>((intensities.array() == top).count()) /
         static_cast<double>(intensities.size());
}

double auto_exposure(const TransmissionMatrix& tm, const Matrix& probes, const CameraConfig& cam,
                     double target_max) {
  if (probes.cols() == 0) throw std::invalid_argument("auto_exposure needs at least one probe");
  const double raw_max = raw_intensity(tm, probes).maxCoeff();
  if (!(raw_max > 0.0)) throw std::domain_error("all probe intensities are zero; no valid exposure");
  if (target_max <= cam.dark_level) throw std::invalid_argument("target level is below the dark level");

  // Peak reading as a function of gain is increasing; bisect on its unrounded value.
  const auto peak = [&](double g) { return g * raw_max + cam.dark_level; };
  double lo = 0.0;
  double hi = 1.0;
  while (peak(hi) < target_max) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (peak(mid) < target_max ? lo : hi) = mid;
  }
  const double gain = 0.5 * (lo + hi);
  if (cam.quantize && quantize_level(peak(gain), cam.bits) != std::round(target_max))
    throw std::domain_error("auto_exposure: target level is not reachable by the quantizer");
  return gain;
}

UniformQuantizationNoise::UniformQuantizationNoise(int bits, double kappa) {
  if (bits < 1 || bits > 62) throw std::invalid_argument("bits must be in [1, 62]");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
  half_width_ = kappa / (2.0 * static_cast<double>((std::uint64_t{1} << bits) - 1));
}

double UniformQuantizationNoise::operator()(Rng& rng) const {
  std::uniform_real_distribution<double> u(-half_width_, half_width_);
  return u(rng);
}

SimulatedOpu::SimulatedOpu(TransmissionMatrix tm, CameraConfig cam)
    : tm_(std::move(tm)), cam_(cam) {
  validate_camera(cam_);
}

void SimulatedOpu::set_camera(const CameraConfig& cam) {
  validate_camera(cam);
  cam_ = cam;
}

IntensityRecord SimulatedOpu::measure(const Matrix& inputs) const {
  if (cam_.binary_mode)
    for (Index c = 0; c < inputs.cols(); ++c)
      if (!is_binary(inputs.col(c)))
        throw std::invalid_argument("binary mode: input " + std::to_string(c) +
                                    " has entries outside {0, 1}");
  return apply_camera(raw_intensity(tm_, inputs), cam_);
}

}  // namespace mpr
