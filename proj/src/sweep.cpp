#include "qcsim/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace qcsim {

void validate_sweep(const SweepSpec& spec) {
    std::vector<std::string> errors;
    if (!(spec.hbar_min > 0.0 && spec.hbar_max > spec.hbar_min))
        errors.emplace_back("hbar range must satisfy 0 < hbar_min < hbar_max");
    if (!(spec.dt_min > 0.0 && spec.dt_max > spec.dt_min))
        errors.emplace_back("dt range must satisfy 0 < dt_min < dt_max");
    if (spec.hbar_count < 2) errors.emplace_back("hbar_count must be at least 2");
    if (spec.dt_count < 2) errors.emplace_back("dt_count must be at least 2");
    if (spec.workers < 0) errors.emplace_back("workers must be nonnegative");
    if (!errors.empty()) {
        std::string joined;
        for (std::size_t i = 0; i < errors.size(); ++i) {
            if (i) joined += "; ";
            joined += errors[i];
        }
        throw ConfigError(joined);
    }
}

std::vector<double> log_axis(double lo, double hi, int count) {
    if (!(lo > 0.0 && hi > lo && count >= 2))
        throw ConfigError("log axis needs 0 < lo < hi and count >= 2");
    std::vector<double> v(static_cast<std::size_t>(count));
    const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i) v[i] = lo * std::exp(ratio * i);
    v.front() = lo;
    v.back() = hi;
    return v;
}

namespace {

SweepCell run_cell(const SweepSpec& spec, int i, int j, double hbar, double dt) {
    SweepCell cell;
    cell.i = i;
    cell.j = j;
    cell.hbar = hbar;
    cell.dt = dt;

    SimConfig cfg = spec.base;
    cfg.hbar = hbar;
    cfg.dt_meas = dt;
    cfg.base_seed = seed_mix(spec.base.base_seed, static_cast<std::uint64_t>(i),
                             static_cast<std::uint64_t>(j));
    cfg.workers = 1;  // parallelism lives at the cell level

    try {
        const ValidatedConfig vc = validate(cfg);
        cell.regime = classify(regime_inputs_for(vc));
        const EnsembleRecord rec = run_ensemble(vc);
        cell.divergence_time = rec.mean_divergence_time;
        cell.censored = rec.censored_count > 0;
    } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
    }
    return cell;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const std::filesystem::path& checkpoint,
                      const std::function<void(const SweepCell&)>& on_cell) {
    validate_sweep(spec);
    SweepResult result;
    result.hbar_values = log_axis(spec.hbar_min, spec.hbar_max, spec.hbar_count);
    result.dt_values = log_axis(spec.dt_min, spec.dt_max, spec.dt_count);
    const std::size_t total =
        static_cast<std::size_t>(spec.hbar_count) * static_cast<std::size_t>(spec.dt_count);
    result.cells.resize(total);
    std::vector<char> done(total, 0);

    // Resume: cells already in the checkpoint are taken as-is.
    if (!checkpoint.empty() && std::filesystem::exists(checkpoint)) {
        std::ifstream in(checkpoint);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line.rfind("i,", 0) == 0) continue;
            SweepCell cell;
            std::istringstream ss(line);
            std::string tok;
            auto next = [&] {
                if (!std::getline(ss, tok, ',')) throw ConfigError("corrupt checkpoint line");
                return tok;
            };
            cell.i = std::stoi(next());
            cell.j = std::stoi(next());
            cell.hbar = std::stod(next());
            cell.dt = std::stod(next());
            const std::string td = next();
            cell.censored = next() == "1";
            const std::string reg = next();
            cell.failed = next() == "1";
            if (std::getline(ss, tok)) cell.error = tok;
            if (!cell.failed) cell.divergence_time = std::stod(td);
            for (RegimeLabel l :
                 {RegimeLabel::uncertainty_dominated, RegimeLabel::wavelike,
                  RegimeLabel::semiclassical, RegimeLabel::indeterminate})
                if (reg == to_string(l)) cell.regime = l;
            if (cell.i < 0 || cell.i >= spec.hbar_count || cell.j < 0 ||
                cell.j >= spec.dt_count)
                continue;
            const std::size_t idx =
                static_cast<std::size_t>(cell.j) * spec.hbar_count + cell.i;
            result.cells[idx] = cell;
            done[idx] = 1;
        }
    }

    std::ofstream sink;
    std::mutex sink_mutex;
    if (!checkpoint.empty()) {
        const bool fresh = !std::filesystem::exists(checkpoint) ||
                           std::filesystem::file_size(checkpoint) == 0;
        sink.open(checkpoint, std::ios::app);
        if (!sink) throw ConfigError("cannot open checkpoint file " + checkpoint.string());
        if (fresh) sink << "i,j,hbar,dt,divergence_time,censored,regime,failed,error\n";
    }
    auto emit = [&](const SweepCell& cell) {
        if (sink.is_open()) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%d,%s,%d,", cell.i, cell.j,
                          cell.hbar, cell.dt, cell.divergence_time, cell.censored ? 1 : 0,
                          to_string(cell.regime), cell.failed ? 1 : 0);
            std::string error = cell.error;
            for (char& ch : error)
                if (ch == '\n' || ch == '\r') ch = ' ';
            sink << buf << error << "\n";
            sink.flush();
        }
        if (on_cell) on_cell(cell);
    };

    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const std::size_t workers = std::min<std::size_t>(
        total, spec.workers > 0 ? static_cast<std::size_t>(spec.workers) : hw);

    std::atomic<std::size_t> cursor{0};
    auto work = [&] {
        for (;;) {
            const std::size_t idx = cursor.fetch_add(1);
            if (idx >= total) return;
            if (done[idx]) continue;
            const int i = static_cast<int>(idx % spec.hbar_count);
            const int j = static_cast<int>(idx / spec.hbar_count);
            SweepCell cell =
                run_cell(spec, i, j, result.hbar_values[i], result.dt_values[j]);
            result.cells[idx] = cell;
            std::lock_guard<std::mutex> lock(sink_mutex);
            emit(cell);
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return result;
}

}  // namespace qcsim
