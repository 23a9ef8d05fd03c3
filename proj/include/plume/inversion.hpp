#ifndef PLUME_INVERSION_HPP
#define PLUME_INVERSION_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "plume/io_util.hpp"
#include "plume/levmar.hpp"
#include "plume/model.hpp"
#include "plume/parameters.hpp"
#include "plume/threading.hpp"

namespace plume {

/// One converged (or capped) minimization.
struct SolutionRecord {
    ParameterVector params;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;
    int run_index = -1;
};

/// The pruned collection of multistart solutions for one candidate source
/// count, sorted ascending by residual.
struct RunSet {
    int source_count = 0;
    ModelSpec spec;
    std::uint64_t master_seed = 0;
    int total_runs = 0;
    std::vector<SolutionRecord> records;
};

struct MinimizeOptions {
    LevMarOptions lm;
    double fd_step = 1e-6; // relative central-difference step (continuous kind)
};

/// Local nonlinear least squares from a single start. Positive parameters
/// are optimized through the softplus transform, so the inner solver is
/// unconstrained while q, D and d stay nonnegative throughout. Throws
/// std::domain_error when the start has a non-finite objective.
inline SolutionRecord minimize(const ParameterVector& start, const ObservationMatrix& obs,
                               const MinimizeOptions& options = {}) {
    start.validate();
    const ResidualModel model(obs, start.spec);

    ParameterVector scratch = start;
    auto residual_fn = [&](const std::vector<double>& theta, std::vector<double>& r) {
        scratch.unpack(theta);
        model.residuals(scratch, r);
    };

    Eigen::MatrixXd J_phys;
    auto jacobian_fn = [&](const std::vector<double>& theta, Eigen::MatrixXd& J) {
        if (model.has_analytic_jacobian()) {
            scratch.unpack(theta);
            model.jacobian(scratch, J_phys);
            const std::vector<double> scale = scratch.pack_scale(theta);
            J = J_phys;
            for (int j = 0; j < J.cols(); ++j) J.col(j) *= scale[j];
        } else {
            // central differences in solver space
            const int dim = static_cast<int>(theta.size());
            std::vector<double> lo, hi, t(theta);
            for (int j = 0; j < dim; ++j) {
                const double h = options.fd_step * std::max(1.0, std::fabs(theta[j]));
                t[j] = theta[j] + h;
                residual_fn(t, hi);
                t[j] = theta[j] - h;
                residual_fn(t, lo);
                t[j] = theta[j];
                if (J.rows() != static_cast<int>(hi.size()) || J.cols() != dim)
                    J.resize(hi.size(), dim);
                for (std::size_t i = 0; i < hi.size(); ++i)
                    J(static_cast<int>(i), j) = (hi[i] - lo[i]) / (2.0 * h);
            }
        }
    };

    const LevMarResult lm =
        levenberg_marquardt(start.pack(), residual_fn, jacobian_fn, options.lm);
    if (!std::isfinite(lm.objective))
        throw std::domain_error("minimize: non-finite objective at start");

    SolutionRecord rec;
    rec.params = start;
    rec.params.unpack(lm.theta);
    if (start.spec.boundary == BoundaryMode::ReflectingAtYZero) {
        // the image kernel is even in y_s; report the half-space representative
        for (auto& s : rec.params.sources) s.y = std::fabs(s.y);
    }
    rec.residual = model.objective(rec.params);
    rec.converged = lm.converged;
    rec.iterations = lm.iterations;
    return rec;
}

/// Multistart options: how many runs, where starts come from, parallelism.
struct MultistartOptions {
    int runs = 200;
    InitGuessDistribution init;
    MinimizeOptions minimize;
    int threads = 1;
};

/// M independent minimizations with per-run seeds derived from
/// (master_seed, run index); records sorted by residual and the worst 10%
/// discarded. The result is a pure function of the inputs regardless of
/// thread count.
inline RunSet multistart(int source_count, const ObservationMatrix& obs, const ModelSpec& spec,
                         std::uint64_t master_seed, const MultistartOptions& options) {
    if (source_count < 1 || static_cast<std::size_t>(source_count) > obs.detector_count())
        throw std::invalid_argument(
            "multistart: source count must be in [1, detector count]");
    if (options.runs < 10) throw std::invalid_argument("multistart: need at least 10 runs");
    options.init.validate();

    const int M = options.runs;
    std::vector<SolutionRecord> records(M);
    std::vector<std::string> failures(M);
    parallel_for(M, options.threads, [&](int r) {
        SplitMix64 rng(derive_seed(master_seed, static_cast<std::uint64_t>(r)));
        const ParameterVector start = options.init.sample(spec, source_count, rng);
        try {
            records[r] = minimize(start, obs, options.minimize);
            records[r].run_index = r;
        } catch (const std::exception& e) {
            records[r].run_index = r;
            records[r].residual = std::numeric_limits<double>::infinity();
            failures[r] = e.what();
        }
    });

    int failed = 0;
    for (const auto& f : failures)
        if (!f.empty()) ++failed;
    if (failed == M)
        throw std::runtime_error("multistart: all " + std::to_string(M) +
                                 " minimizations failed; first error: " + *std::find_if(
                                     failures.begin(), failures.end(),
                                     [](const std::string& s) { return !s.empty(); }));

    std::sort(records.begin(), records.end(), [](const SolutionRecord& a, const SolutionRecord& b) {
        const bool fa = std::isfinite(a.residual), fb = std::isfinite(b.residual);
        if (fa != fb) return fa;
        if (a.residual != b.residual) return a.residual < b.residual;
        return a.run_index < b.run_index;
    });
    records.resize(M - M / 10); // drop the worst floor(M/10)
    for (const auto& rec : records)
        if (!std::isfinite(rec.residual))
            throw std::runtime_error("multistart: " + std::to_string(failed) + " of " +
                                     std::to_string(M) +
                                     " runs failed, exceeding the 10% prune budget");

    RunSet out;
    out.source_count = source_count;
    out.spec = spec;
    out.master_seed = master_seed;
    out.total_runs = M;
    out.records = std::move(records);
    return out;
}

// ---------------------------------------------------------------------------
// RunSet serialization (structured text, 17 significant digits)
// ---------------------------------------------------------------------------

inline void save_runset(const RunSet& rs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "# plume runset\n";
    out << "source_count = " << rs.source_count << "\n";
    out << "model = " << to_string(rs.spec.kind) << "\n";
    out << "boundary = " << to_string(rs.spec.boundary) << "\n";
    out << "t0 = " << format_g17(rs.spec.t0) << "\n";
    out << "master_seed = " << rs.master_seed << "\n";
    out << "total_runs = " << rs.total_runs << "\n";
    out << "columns = run_index converged iterations residual u_x D_x D_y";
    for (int s = 1; s <= rs.source_count; ++s) {
        out << " x" << s << " y" << s << " q" << s;
        if (rs.spec.kind == SourceKind::ExtendedSquare) out << " d" << s;
    }
    out << "\n";
    for (const auto& rec : rs.records) {
        out << rec.run_index << ' ' << (rec.converged ? 1 : 0) << ' ' << rec.iterations << ' '
            << format_g17(rec.residual) << ' ' << format_g17(rec.params.medium.u_x) << ' '
            << format_g17(rec.params.medium.D_x) << ' ' << format_g17(rec.params.medium.D_y);
        for (const auto& s : rec.params.sources) {
            out << ' ' << format_g17(s.x) << ' ' << format_g17(s.y) << ' ' << format_g17(s.q);
            if (rs.spec.kind == SourceKind::ExtendedSquare) out << ' ' << format_g17(s.d);
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

inline RunSet load_runset(std::istream& in) {
    RunSet rs;
    std::string line;
    int lineno = 1;
    if (!std::getline(in, line) || trim(line) != "# plume runset")
        throw ParseError(lineno, 1, "expected '# plume runset' header");
    bool have_columns = false;
    while (!have_columns && std::getline(in, line)) {
        ++lineno;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, 1, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const int vcol = static_cast<int>(eq) + 2;
        if (key == "source_count")
            rs.source_count = static_cast<int>(parse_int_at(val, lineno, vcol));
        else if (key == "model")
            rs.spec.kind = source_kind_from_string(val);
        else if (key == "boundary")
            rs.spec.boundary = boundary_from_string(val);
        else if (key == "t0")
            rs.spec.t0 = parse_double_at(val, lineno, vcol);
        else if (key == "master_seed")
            rs.master_seed = static_cast<std::uint64_t>(parse_int_at(val, lineno, vcol));
        else if (key == "total_runs")
            rs.total_runs = static_cast<int>(parse_int_at(val, lineno, vcol));
        else if (key == "columns")
            have_columns = true;
        else
            throw ParseError(lineno, 1, "unknown runset key '" + key + "'");
    }
    if (!have_columns) throw StructuralError("runset file missing columns row");
    if (rs.source_count < 1) throw StructuralError("runset declares no sources");

    const int block = rs.spec.kind == SourceKind::ExtendedSquare ? 4 : 3;
    const std::size_t expect = 7 + static_cast<std::size_t>(rs.source_count) * block;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<CsvField> fields;
        for (const CsvField& f : split_fields(line, ' '))
            if (!trim(f.text).empty()) fields.push_back(f);
        if (fields.size() != expect)
            throw StructuralError("runset row " + std::to_string(lineno) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(expect));
        SolutionRecord rec;
        rec.params.spec = rs.spec;
        std::size_t j = 0;
        rec.run_index = static_cast<int>(parse_int_at(fields[j].text, lineno, fields[j].col));
        ++j;
        rec.converged = parse_int_at(fields[j].text, lineno, fields[j].col) != 0;
        ++j;
        rec.iterations = static_cast<int>(parse_int_at(fields[j].text, lineno, fields[j].col));
        ++j;
        rec.residual = parse_double_at(fields[j].text, lineno, fields[j].col);
        ++j;
        rec.params.medium.u_x = parse_double_at(fields[j].text, lineno, fields[j].col);
        ++j;
        rec.params.medium.D_x = parse_double_at(fields[j].text, lineno, fields[j].col);
        ++j;
        rec.params.medium.D_y = parse_double_at(fields[j].text, lineno, fields[j].col);
        ++j;
        rec.params.sources.resize(rs.source_count);
        for (auto& s : rec.params.sources) {
            s.x = parse_double_at(fields[j].text, lineno, fields[j].col);
            ++j;
            s.y = parse_double_at(fields[j].text, lineno, fields[j].col);
            ++j;
            s.q = parse_double_at(fields[j].text, lineno, fields[j].col);
            ++j;
            if (rs.spec.kind == SourceKind::ExtendedSquare) {
                s.d = parse_double_at(fields[j].text, lineno, fields[j].col);
                ++j;
            }
        }
        rs.records.push_back(std::move(rec));
    }
    if (rs.records.empty()) throw StructuralError("runset has no records");
    return rs;
}

inline RunSet load_runset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return load_runset(in);
}

} // namespace plume

#endif
