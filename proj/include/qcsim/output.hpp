#ifndef QCSIM_OUTPUT_HPP
#define QCSIM_OUTPUT_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qcsim/simulation.hpp"
#include "qcsim/sweep.hpp"

namespace qcsim {

std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

// RFC-4180 style: fields holding commas, quotes or newlines are quoted,
// embedded quotes doubled.
std::string csv_escape(const std::string& field);

std::string classical_csv(const EnsembleRecord& rec);
std::string quantum_csv(const EnsembleRecord& rec);
std::string rms_csv(const EnsembleRecord& rec);
std::string wavefunction_csv(const WaveFunction& psi);
std::string husimi_csv(const HusimiField& field);
std::string sweep_csv(const SweepResult& result);
std::string sweep_manifest_json(const SweepSpec& spec, const SweepResult& result);
std::string result_json(const EnsembleRecord& rec);

// Perceptually monotone color ramp (viridis anchors), u in [0, 1].
std::array<int, 3> color_ramp(double u);

// Phase portrait: classical polyline in red, sampled quantum polyline in
// purple, axes autoscaled with a 5% margin. Ensemble records plot the
// classical reference against member 0 (per_run) or the pooled first member.
std::string phase_portrait_svg(const EnsembleRecord& rec);

// Divergence-time heatmap on log axes (hbar horizontal, dt vertical), color
// over log divergence time, censored cells hatched, failed cells crossed out.
std::string heatmap_svg(const SweepResult& result);

struct EmittedFile {
    std::string name;
    std::uint64_t bytes = 0;
    std::string checksum;
};

// Writes `content` under dir/name and records it for the manifest.
EmittedFile write_output_file(const std::filesystem::path& dir, const std::string& name,
                              const std::string& content);

std::string manifest_json(const std::string& command, std::uint64_t seed,
                          const std::vector<EmittedFile>& files);

}  // namespace qcsim

#endif
