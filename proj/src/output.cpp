#include "qcsim/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qcsim/version.hpp"

namespace qcsim {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fixed(double v, const char* fmt = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view data) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

std::string classical_csv(const EnsembleRecord& rec) {
    std::ostringstream out;
    out << "t,x,p\n";
    if (rec.mode == DivergenceMode::per_run) {
        if (!rec.runs.empty()) {
            const RunRecord& r = rec.runs.front();
            for (std::size_t k = 0; k < r.times.size(); ++k)
                out << num(r.times[k]) << ',' << num(r.classical[k].x) << ','
                    << num(r.classical[k].p) << '\n';
        }
    } else {
        for (std::size_t k = 0; k < rec.times.size(); ++k)
            out << num(rec.times[k]) << ',' << num(rec.classical[k].x) << ','
                << num(rec.classical[k].p) << '\n';
    }
    return out.str();
}

std::string quantum_csv(const EnsembleRecord& rec) {
    std::ostringstream out;
    out << "run,t,x,p\n";
    if (rec.mode == DivergenceMode::per_run) {
        for (std::size_t i = 0; i < rec.runs.size(); ++i) {
            const RunRecord& r = rec.runs[i];
            for (std::size_t k = 0; k < r.times.size(); ++k)
                out << i << ',' << num(r.times[k]) << ',' << num(r.quantum[k].x) << ','
                    << num(r.quantum[k].p) << '\n';
        }
    } else {
        for (std::size_t k = 0; k < rec.times.size(); ++k)
            for (std::size_t i = 0; i < rec.pooled[k].size(); ++i)
                out << i << ',' << num(rec.times[k]) << ',' << num(rec.pooled[k][i].x) << ','
                    << num(rec.pooled[k][i].p) << '\n';
    }
    return out.str();
}

std::string rms_csv(const EnsembleRecord& rec) {
    std::ostringstream out;
    if (rec.mode == DivergenceMode::per_run) {
        out << "run,t,rms\n";
        for (std::size_t i = 0; i < rec.runs.size(); ++i)
            for (const auto& [t, d] : rec.runs[i].rms.samples)
                out << i << ',' << num(t) << ',' << num(d) << '\n';
    } else {
        out << "t,rms\n";
        for (const auto& [t, d] : rec.rms.samples) out << num(t) << ',' << num(d) << '\n';
    }
    return out.str();
}

std::string wavefunction_csv(const WaveFunction& psi) {
    std::ostringstream out;
    out << "x,re_psi,im_psi\n";
    for (std::size_t j = 0; j < psi.grid.n; ++j)
        out << num(psi.grid.x(j)) << ',' << num(psi.amp[j].real()) << ','
            << num(psi.amp[j].imag()) << '\n';
    return out.str();
}

std::string husimi_csv(const HusimiField& field) {
    std::ostringstream out;
    out << "x,p,q\n";
    for (int ix = 0; ix < field.resolution; ++ix)
        for (int ip = 0; ip < field.resolution; ++ip) {
            const PhasePoint c = field.cell_center(ix, ip);
            out << num(c.x) << ',' << num(c.p) << ',' << num(field.value_at(ix, ip)) << '\n';
        }
    return out.str();
}

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "i,j,hbar,dt,divergence_time,censored,regime,status\n";
    for (const SweepCell& cell : result.cells) {
        out << cell.i << ',' << cell.j << ',' << num(cell.hbar) << ',' << num(cell.dt) << ',';
        if (cell.failed)
            out << ",0," << to_string(cell.regime) << ','
                << csv_escape("failed: " + cell.error);
        else
            out << num(cell.divergence_time) << ',' << (cell.censored ? 1 : 0) << ','
                << to_string(cell.regime) << ",ok";
        out << '\n';
    }
    return out.str();
}

std::string sweep_manifest_json(const SweepSpec& spec, const SweepResult& result) {
    nlohmann::json j;
    j["tool"] = "qcsim";
    j["version"] = QCSIM_VERSION;
    j["command"] = "sweep";
    j["hbar_values"] = result.hbar_values;
    j["dt_values"] = result.dt_values;
    j["base_seed"] = spec.base.base_seed;
    j["cell_seed_rule"] = "seed_mix(base_seed, i, j)";
    j["censoring_floor_t_max"] = spec.base.t_max;
    j["ensemble_size"] = spec.base.ensemble_size;
    j["divergence_mode"] =
        spec.base.divergence_mode == DivergenceMode::per_run ? "per_run" : "ensemble_rms";
    j["config_text"] = config_to_text(spec.base);
    j["columns"] = {"i", "j", "hbar", "dt", "divergence_time", "censored", "regime", "status"};
    return j.dump(2) + "\n";
}

namespace {

nlohmann::json triples(const std::vector<double>& t, const std::vector<PhasePoint>& pts) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t k = 0; k < t.size(); ++k)
        arr.push_back({t[k], pts[k].x, pts[k].p});
    return arr;
}

}  // namespace

std::string result_json(const EnsembleRecord& rec) {
    nlohmann::json j;
    j["tool"] = "qcsim";
    j["version"] = QCSIM_VERSION;
    j["mode"] = rec.mode == DivergenceMode::per_run ? "per_run" : "ensemble_rms";
    j["mean_divergence_time"] = rec.mean_divergence_time;
    if (rec.divergence_time) j["divergence_time"] = *rec.divergence_time;
    else j["divergence_time"] = nullptr;
    j["censored_count"] = rec.censored_count;
    j["breakdown_count"] = rec.breakdown_count;
    j["censoring_floor_t_max"] = rec.config.t_max;
    j["grid_points_used"] = rec.grid_points_used;
    j["config_text"] = config_to_text(rec.config);

    if (rec.mode == DivergenceMode::per_run) {
        nlohmann::json runs = nlohmann::json::array();
        for (const RunRecord& r : rec.runs) {
            nlohmann::json jr;
            jr["seed"] = r.seed;
            if (r.divergence_time) jr["divergence_time"] = *r.divergence_time;
            else jr["divergence_time"] = nullptr;
            jr["censored"] = r.censored;
            jr["breakdown"] = r.breakdown;
            if (r.breakdown) jr["breakdown_reason"] = r.breakdown_reason;
            jr["samples"] = triples(r.times, r.quantum);
            jr["classical"] = triples(r.times, r.classical);
            nlohmann::json rms = nlohmann::json::array();
            for (const auto& [t, d] : r.rms.samples) rms.push_back({t, d});
            jr["rms"] = rms;
            runs.push_back(std::move(jr));
        }
        j["runs"] = std::move(runs);
    } else {
        nlohmann::json pooled = nlohmann::json::array();
        for (std::size_t k = 0; k < rec.times.size(); ++k) {
            nlohmann::json members = nlohmann::json::array();
            for (const PhasePoint& q : rec.pooled[k]) members.push_back({q.x, q.p});
            pooled.push_back(std::move(members));
        }
        j["times"] = rec.times;
        j["pooled_samples"] = std::move(pooled);
        j["classical"] = triples(rec.times, rec.classical);
        nlohmann::json rms = nlohmann::json::array();
        for (const auto& [t, d] : rec.rms.samples) rms.push_back({t, d});
        j["rms"] = rms;
    }
    return j.dump(2) + "\n";
}

std::array<int, 3> color_ramp(double u) {
    static constexpr std::array<std::array<double, 3>, 5> anchors{{{68, 1, 84},
                                                                   {59, 82, 139},
                                                                   {33, 145, 140},
                                                                   {94, 201, 98},
                                                                   {253, 231, 37}}};
    u = std::clamp(u, 0.0, 1.0);
    const double s = u * 4.0;
    const int lo = std::min(3, static_cast<int>(s));
    const double f = s - lo;
    std::array<int, 3> rgb{};
    for (int c = 0; c < 3; ++c)
        rgb[c] = static_cast<int>(std::lround((1.0 - f) * anchors[lo][c] +
                                              f * anchors[lo + 1][c]));
    return rgb;
}

namespace {

std::string rgb_hex(const std::array<int, 3>& c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
    return buf;
}

struct Mapper {
    double lo, hi, a, b;  // value range -> pixel range
    double operator()(double v) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

void axis_range(double& lo, double& hi) {
    if (!(hi > lo)) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
}

std::string polyline(const std::vector<PhasePoint>& pts, const Mapper& mx, const Mapper& mp,
                     const char* color, double width) {
    std::ostringstream out;
    out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
        << "\" points=\"";
    for (const PhasePoint& q : pts) out << fixed(mx(q.x)) << ',' << fixed(mp(q.p)) << ' ';
    out << "\"/>\n";
    return out.str();
}

}  // namespace

std::string phase_portrait_svg(const EnsembleRecord& rec) {
    std::vector<PhasePoint> cl, qu;
    if (rec.mode == DivergenceMode::per_run) {
        if (!rec.runs.empty()) {
            cl = rec.runs.front().classical;
            qu = rec.runs.front().quantum;
        }
    } else {
        cl = rec.classical;
        for (const auto& members : rec.pooled)
            if (!members.empty()) qu.push_back(members.front());
    }

    double x_lo = 0.0, x_hi = 0.0, p_lo = 0.0, p_hi = 0.0;
    bool first = true;
    for (const auto* traj : {&cl, &qu})
        for (const PhasePoint& q : *traj) {
            if (first) {
                x_lo = x_hi = q.x;
                p_lo = p_hi = q.p;
                first = false;
            }
            x_lo = std::min(x_lo, q.x);
            x_hi = std::max(x_hi, q.x);
            p_lo = std::min(p_lo, q.p);
            p_hi = std::max(p_hi, q.p);
        }
    axis_range(x_lo, x_hi);
    axis_range(p_lo, p_hi);

    const double W = 720, H = 540, L = 70, R = 20, T = 20, B = 50;
    const Mapper mx{x_lo, x_hi, L, W - R};
    const Mapper mp{p_lo, p_hi, H - B, T};  // p grows upward

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
        << "  <rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H
        << "\" fill=\"white\"/>\n"
        << "  <rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R
        << "\" height=\"" << H - T - B << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x_lo + (x_hi - x_lo) * k / 4.0;
        const double pv = p_lo + (p_hi - p_lo) * k / 4.0;
        out << "  <text x=\"" << fixed(mx(xv)) << "\" y=\"" << H - B + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">" << fixed(xv, "%.3g")
            << "</text>\n";
        out << "  <text x=\"" << L - 8 << "\" y=\"" << fixed(mp(pv) + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << fixed(pv, "%.3g") << "</text>\n";
    }
    out << "  <text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
        << "\" font-size=\"14\" text-anchor=\"middle\">x</text>\n"
        << "  <text x=\"18\" y=\"" << (T + H - B) / 2
        << "\" font-size=\"14\" text-anchor=\"middle\">p</text>\n";
    if (!cl.empty()) out << polyline(cl, mx, mp, "#d62728", 1.6);
    if (!qu.empty()) out << polyline(qu, mx, mp, "#9467bd", 1.2);
    out << "</svg>\n";
    return out.str();
}

std::string heatmap_svg(const SweepResult& result) {
    const int ni = static_cast<int>(result.hbar_values.size());
    const int nj = static_cast<int>(result.dt_values.size());
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const SweepCell& cell : result.cells) {
        if (cell.failed || !(cell.divergence_time > 0.0)) continue;
        const double v = std::log10(cell.divergence_time);
        if (first) {
            lo = hi = v;
            first = false;
        }
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const bool flat = !(hi > lo);

    const double L = 90, T = 20, cw = 28, ch = 22, bar_w = 18, gap = 30;
    const double W = L + ni * cw + gap + bar_w + 70, H = T + nj * ch + 60;

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
        << "  <defs>\n"
        << "    <pattern id=\"hatch\" width=\"6\" height=\"6\" "
           "patternUnits=\"userSpaceOnUse\" patternTransform=\"rotate(45)\">\n"
        << "      <line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"white\" "
           "stroke-width=\"1.5\"/>\n"
        << "    </pattern>\n"
        << "  </defs>\n"
        << "  <rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H
        << "\" fill=\"white\"/>\n";

    for (const SweepCell& cell : result.cells) {
        const double x = L + cell.i * cw;
        const double y = T + (nj - 1 - cell.j) * ch;  // dt grows upward
        std::string fill = "#555555";
        if (!cell.failed && cell.divergence_time > 0.0) {
            const double u =
                flat ? 0.5 : (std::log10(cell.divergence_time) - lo) / (hi - lo);
            fill = rgb_hex(color_ramp(u));
        }
        out << "  <rect x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" width=\"" << cw
            << "\" height=\"" << ch << "\" fill=\"" << fill << "\"/>\n";
        if (cell.failed) {
            out << "  <line x1=\"" << fixed(x) << "\" y1=\"" << fixed(y) << "\" x2=\""
                << fixed(x + cw) << "\" y2=\"" << fixed(y + ch)
                << "\" stroke=\"#cc2222\" stroke-width=\"1.5\"/>\n";
        } else if (cell.censored) {
            out << "  <rect x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" width=\"" << cw
                << "\" height=\"" << ch << "\" fill=\"url(#hatch)\"/>\n";
        }
    }

    out << "  <rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << ni * cw << "\" height=\""
        << nj * ch << "\" fill=\"none\" stroke=\"#333\"/>\n";
    // axis endpoint labels: the geometric progression endpoints
    out << "  <text x=\"" << fixed(L + 0.5 * cw) << "\" y=\"" << fixed(T + nj * ch + 18)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << fixed(result.hbar_values.front(), "%.3g")
        << "</text>\n"
        << "  <text x=\"" << fixed(L + (ni - 0.5) * cw) << "\" y=\"" << fixed(T + nj * ch + 18)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << fixed(result.hbar_values.back(), "%.3g")
        << "</text>\n"
        << "  <text x=\"" << fixed(L + ni * cw / 2.0) << "\" y=\"" << fixed(T + nj * ch + 40)
        << "\" font-size=\"14\" text-anchor=\"middle\">hbar (log)</text>\n"
        << "  <text x=\"" << L - 10 << "\" y=\"" << fixed(T + (nj - 0.5) * ch + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">" << fixed(result.dt_values.front(), "%.3g")
        << "</text>\n"
        << "  <text x=\"" << L - 10 << "\" y=\"" << fixed(T + 0.5 * ch + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">" << fixed(result.dt_values.back(), "%.3g")
        << "</text>\n"
        << "  <text x=\"24\" y=\"" << fixed(T + nj * ch / 2.0)
        << "\" font-size=\"14\" text-anchor=\"middle\">dt (log)</text>\n";

    // colorbar, low at the bottom
    const double bx = L + ni * cw + gap, btop = T, bh = nj * ch;
    const int strips = 64;
    for (int s = 0; s < strips; ++s) {
        const double u = (s + 0.5) / strips;
        out << "  <rect x=\"" << fixed(bx) << "\" y=\"" << fixed(btop + bh * (1.0 - (s + 1.0) / strips))
            << "\" width=\"" << bar_w << "\" height=\"" << fixed(bh / strips + 0.5)
            << "\" fill=\"" << rgb_hex(color_ramp(u)) << "\"/>\n";
    }
    out << "  <rect x=\"" << fixed(bx) << "\" y=\"" << fixed(btop) << "\" width=\"" << bar_w
        << "\" height=\"" << fixed(bh) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    const double v_lo = flat ? 0.0 : std::pow(10.0, lo);
    const double v_hi = flat ? 0.0 : std::pow(10.0, hi);
    out << "  <text x=\"" << fixed(bx + bar_w + 6) << "\" y=\"" << fixed(btop + bh)
        << "\" font-size=\"12\">" << fixed(v_lo, "%.3g") << "</text>\n"
        << "  <text x=\"" << fixed(bx + bar_w + 6) << "\" y=\"" << fixed(btop + 10)
        << "\" font-size=\"12\">" << fixed(v_hi, "%.3g") << "</text>\n"
        << "  <text x=\"" << fixed(bx + bar_w + 6) << "\" y=\"" << fixed(btop + bh / 2.0)
        << "\" font-size=\"11\">t_div (s)</text>\n";
    out << "</svg>\n";
    return out.str();
}

EmittedFile write_output_file(const std::filesystem::path& dir, const std::string& name,
                              const std::string& content) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file " + (dir / name).string());
    out << content;
    return {name, content.size(), fnv1a64_hex(content)};
}

std::string manifest_json(const std::string& command, std::uint64_t seed,
                          const std::vector<EmittedFile>& files) {
    nlohmann::json j;
    j["tool"] = "qcsim";
    j["version"] = QCSIM_VERSION;
    j["command"] = command;
    j["seed"] = seed;
    j["config_snapshot"] = "config_snapshot.cfg";
    nlohmann::json arr = nlohmann::json::array();
    for (const EmittedFile& f : files) {
        nlohmann::json e;
        e["name"] = f.name;
        e["bytes"] = f.bytes;
        e["fnv1a64"] = f.checksum;
        arr.push_back(std::move(e));
    }
    j["files"] = std::move(arr);
    return j.dump(2) + "\n";
}

}  // namespace qcsim
