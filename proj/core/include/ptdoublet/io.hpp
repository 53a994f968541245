#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptdoublet/contour.hpp"
#include "ptdoublet/numeric.hpp"
#include "ptdoublet/spectrum.hpp"
#include "ptdoublet/verify.hpp"
#include "ptdoublet/wavefn.hpp"

namespace ptdoublet {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest representation that reads back to the same double.
std::string csv_number(double x);

/// Writes to a sibling temporary and renames it over `path`. Throws IoError.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string contour_csv(const ContourGrid& grid);
std::string potential_csv(const ContourGrid& grid, const std::vector<cplx>& values);
/// Grid metadata and every point; `potential`, when not empty, adds V.
std::string contour_json(const ContourGrid& grid, const std::vector<cplx>& potential = {});

std::string spectrum_json(const SpectrumReport& rep);
std::string spectrum_csv(const SpectrumReport& rep);
std::string eckart_spectrum_json(const EckartParams& p, const std::vector<EckartLevel>& levels);
std::string eckart_spectrum_csv(const std::vector<EckartLevel>& levels);

std::string wavefunction_csv(const WaveSamples& s);
std::string wavefunction_json(const WaveSamples& s, const std::string& model, std::optional<double> residual);

struct EigenDumpMeta {
  std::string model;
  std::string profile;
  double eps0 = 0.0;
  double T = 0.0;
};

std::string eigen_dump_json(const Confirmation& c, const EigenDumpMeta& meta);
std::string verification_json(const VerificationReport& rep);
/// One row per measured value: check,passed,key,value.
std::string verification_csv(const VerificationReport& rep);

}  // namespace ptdoublet
