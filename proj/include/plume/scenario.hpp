#ifndef PLUME_SCENARIO_HPP
#define PLUME_SCENARIO_HPP

#include <cstdint>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "plume/errors.hpp"
#include "plume/forward.hpp"
#include "plume/io_util.hpp"
#include "plume/rng.hpp"
#include "plume/types.hpp"

namespace plume {

struct NoiseSpec {
    double std_dev = 0.0;     // [mg/L], absolute
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (!(std_dev >= 0.0)) throw std::invalid_argument("noise: std_dev must be >= 0");
    }
};

/// N x T detector record plus the geometry and schedule that produced it.
/// Raw noisy values are stored unclamped; the nonnegativity constraints of
/// the inversion apply to model parameters, not to data.
struct ObservationMatrix {
    std::vector<double> values; // row-major, [n * T + k]
    DetectorArray detectors;
    SamplingSchedule schedule;
    BoundaryMode boundary = BoundaryMode::Infinite;
    double noise_std = 0.0;
    std::uint64_t seed = 0;

    std::size_t detector_count() const { return detectors.size(); }
    int sample_count() const { return schedule.count(); }

    double& at(std::size_t n, int k) { return values[n * sample_count() + k]; }
    double at(std::size_t n, int k) const { return values[n * sample_count() + k]; }

    std::span<const double> row(std::size_t n) const {
        return {values.data() + n * sample_count(), static_cast<std::size_t>(sample_count())};
    }
};

/// Synthesize a noisy observation matrix: linear superposition of the
/// source plumes at every detector plus i.i.d. Gaussian noise. Noise is
/// addressed per cell by (seed, detector, sample), so the result is
/// independent of evaluation order.
inline ObservationMatrix simulate_observations(std::span<const SourceSpec> sources,
                                               const MediumParams& medium,
                                               BoundaryMode boundary,
                                               const DetectorArray& detectors,
                                               const SamplingSchedule& schedule,
                                               const NoiseSpec& noise) {
    medium.validate();
    detectors.validate();
    schedule.validate();
    noise.validate();
    for (const auto& s : sources) {
        s.validate();
        if (schedule.t_start <= s.t0)
            throw std::invalid_argument("schedule must start after every source activation");
    }
    if (boundary == BoundaryMode::ReflectingAtYZero) {
        for (const auto& s : sources)
            if (s.y < 0.0)
                throw std::invalid_argument(
                    "reflecting boundary requires source y >= 0 (reflect the scenario)");
        for (const auto& p : detectors.positions)
            if (p.y < 0.0)
                throw std::invalid_argument(
                    "reflecting boundary requires detector y >= 0 (reflect the scenario)");
    }
    const std::vector<double> times = schedule.times();
    ObservationMatrix obs;
    obs.detectors = detectors;
    obs.schedule = schedule;
    obs.boundary = boundary;
    obs.noise_std = noise.std_dev;
    obs.seed = noise.rng_seed;
    obs.values.assign(detectors.size() * times.size(), 0.0);
    for (std::size_t n = 0; n < detectors.size(); ++n) {
        std::vector<double> series =
            forward_series(sources, medium, boundary, detectors.positions[n].x,
                           detectors.positions[n].y, times);
        for (std::size_t k = 0; k < times.size(); ++k) {
            double v = series[k];
            if (noise.std_dev > 0.0)
                v += noise.std_dev * gaussian_at(noise.rng_seed, n, k);
            obs.at(n, static_cast<int>(k)) = v;
        }
    }
    return obs;
}

/// One of the two built-in synthetic test configurations.
struct BuiltinConfiguration {
    DetectorArray detectors;
    std::vector<SourceSpec> sources;
    MediumParams medium;
};

/// Built-in detector/source layouts. Sources, strengths and medium follow
/// the published test setups (u_x = 0.05 km/yr, D_x = 0.005 km^2/yr,
/// D_y = 0.00125 km^2/yr, activation at t = -10 yr); detector coordinates
/// are regular arrays spanning the source region and the advected plumes.
inline BuiltinConfiguration builtin_configuration(const std::string& name) {
    BuiltinConfiguration cfg;
    cfg.medium = {0.05, 0.005, 0.00125};
    const double t0 = -10.0;
    if (name == "A") {
        // nine detectors on a 3x3 grid downstream of the sources, four
        // equal-strength sources
        for (double y : {-0.45, 0.15, 0.7})
            for (double x : {0.7, 1.05, 1.4})
                cfg.detectors.positions.push_back({x, y});
        cfg.sources = {
            {SourceKind::InstantPoint, -0.3, -0.4, 0.5, 0.0, t0},
            {SourceKind::InstantPoint, 0.4, -0.3, 0.5, 0.0, t0},
            {SourceKind::InstantPoint, -0.3, 0.65, 0.5, 0.0, t0},
            {SourceKind::InstantPoint, -0.1, 0.25, 0.5, 0.0, t0},
        };
    } else if (name == "B") {
        // five detectors (rectangle corners plus center), three sources
        cfg.detectors.positions = {
            {-0.55, -0.75}, {-0.55, 0.5}, {0.3, 0.0}, {1.15, 0.5}, {1.15, -0.75}};
        cfg.sources = {
            {SourceKind::InstantPoint, -0.9, -0.8, 0.5, 0.0, t0},
            {SourceKind::InstantPoint, -0.1, -0.2, 0.7, 0.0, t0},
            {SourceKind::InstantPoint, -0.2, 0.6, 0.3, 0.0, t0},
        };
    } else {
        throw std::invalid_argument("unknown built-in configuration '" + name + "'");
    }
    return cfg;
}

/// The standard sampling schedule of the built-in setups: 20 years of
/// quarterly measurements starting at t = 0.
inline SamplingSchedule builtin_schedule() { return {0.0, 20.0, 4}; }

namespace detail {

inline std::vector<double> parse_double_list(const std::string& text, int line, int col) {
    std::vector<double> out;
    for (const CsvField& f : split_fields(text, ','))
        out.push_back(parse_double_at(f.text, line, col + f.col - 1));
    return out;
}

} // namespace detail

/// Write an observation matrix as commented-metadata CSV. Values carry 17
/// significant digits so a round trip is bit-exact.
inline void save_observations(const ObservationMatrix& obs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    const std::size_t n_det = obs.detector_count();
    std::string xs, ys;
    for (std::size_t n = 0; n < n_det; ++n) {
        if (n) {
            xs += ',';
            ys += ',';
        }
        xs += format_g17(obs.detectors.positions[n].x);
        ys += format_g17(obs.detectors.positions[n].y);
    }
    out << "# detector_x = " << xs << "\n";
    out << "# detector_y = " << ys << "\n";
    out << "# t_start = " << format_g17(obs.schedule.t_start) << "\n";
    out << "# duration = " << format_g17(obs.schedule.duration) << "\n";
    out << "# samples_per_year = " << obs.schedule.samples_per_year << "\n";
    out << "# boundary = " << to_string(obs.boundary) << "\n";
    out << "# noise_std = " << format_g17(obs.noise_std) << "\n";
    out << "# seed = " << obs.seed << "\n";
    out << "time";
    for (std::size_t n = 0; n < n_det; ++n) out << ",D" << (n + 1);
    out << "\n";
    for (int k = 0; k < obs.sample_count(); ++k) {
        out << format_g17(obs.schedule.time_at(k));
        for (std::size_t n = 0; n < n_det; ++n) out << ',' << format_g17(obs.at(n, k));
        out << "\n";
    }
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

inline ObservationMatrix load_observations(std::istream& in) {
    ObservationMatrix obs;
    std::vector<double> det_x, det_y;
    bool have[8] = {};
    std::string line;
    int lineno = 0;

    // metadata preamble
    while (in.peek() == '#') {
        std::getline(in, line);
        ++lineno;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, 1, "metadata line without '='");
        const std::string key = trim(line.substr(1, eq - 1));
        const std::string val = trim(line.substr(eq + 1));
        const int vcol = static_cast<int>(eq) + 2;
        if (key == "detector_x") {
            det_x = detail::parse_double_list(val, lineno, vcol);
            have[0] = true;
        } else if (key == "detector_y") {
            det_y = detail::parse_double_list(val, lineno, vcol);
            have[1] = true;
        } else if (key == "t_start") {
            obs.schedule.t_start = parse_double_at(val, lineno, vcol);
            have[2] = true;
        } else if (key == "duration") {
            obs.schedule.duration = parse_double_at(val, lineno, vcol);
            have[3] = true;
        } else if (key == "samples_per_year") {
            obs.schedule.samples_per_year = static_cast<int>(parse_int_at(val, lineno, vcol));
            have[4] = true;
        } else if (key == "boundary") {
            obs.boundary = boundary_from_string(val);
            have[5] = true;
        } else if (key == "noise_std") {
            obs.noise_std = parse_double_at(val, lineno, vcol);
            have[6] = true;
        } else if (key == "seed") {
            obs.seed = static_cast<std::uint64_t>(parse_int_at(val, lineno, vcol));
            have[7] = true;
        } else {
            throw ParseError(lineno, 3, "unknown metadata key '" + key + "'");
        }
    }
    for (bool h : have)
        if (!h) throw StructuralError("observation file is missing metadata keys");
    if (det_x.size() != det_y.size())
        throw StructuralError("detector_x and detector_y lists differ in length");
    for (std::size_t n = 0; n < det_x.size(); ++n)
        obs.detectors.positions.push_back({det_x[n], det_y[n]});

    // column header
    if (!std::getline(in, line)) throw StructuralError("missing column header row");
    ++lineno;
    const auto header = split_fields(line, ',');
    if (header.empty() || trim(header[0].text) != "time")
        throw ParseError(lineno, 1, "expected header row starting with 'time'");
    if (header.size() != det_x.size() + 1)
        throw StructuralError("header declares " + std::to_string(header.size() - 1) +
                              " detectors but metadata lists " + std::to_string(det_x.size()));

    obs.detectors.validate();
    obs.schedule.validate();
    const int T = obs.schedule.count();
    const std::size_t N = obs.detectors.size();
    obs.values.assign(N * static_cast<std::size_t>(T), 0.0);

    int k = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        if (k >= T)
            throw StructuralError("more data rows than the declared schedule (" +
                                  std::to_string(T) + ")");
        const auto fields = split_fields(line, ',');
        if (fields.size() != N + 1)
            throw StructuralError("row " + std::to_string(lineno) + " has " +
                                  std::to_string(fields.size() - 1) + " value columns, expected " +
                                  std::to_string(N));
        const double t = parse_double_at(fields[0].text, lineno, fields[0].col);
        if (t != obs.schedule.time_at(k))
            throw StructuralError("row time " + format_g17(t) + " does not match schedule slot " +
                                  std::to_string(k));
        for (std::size_t n = 0; n < N; ++n)
            obs.at(n, k) = parse_double_at(fields[n + 1].text, lineno, fields[n + 1].col);
        ++k;
    }
    if (k != T)
        throw StructuralError("expected " + std::to_string(T) + " data rows, found " +
                              std::to_string(k));
    return obs;
}

inline ObservationMatrix load_observations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return load_observations(in);
}

} // namespace plume

#endif
