#include "desync/charts.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>

#include "desync/phase_math.hpp"

namespace desync {

namespace {

constexpr int kWidth = 900;
constexpr int kHeight = 520;
constexpr int kMarginLeft = 60;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

std::string color_for(int index) {
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    char buf[32];
    if (index < 10) return palette[index];
    // Derived hues beyond the base palette.
    std::snprintf(buf, sizeof buf, "hsl(%d,60%%,40%%)", (index * 47) % 360);
    return buf;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ':' || c == '/' || c == '\\' || c == ' ') c = '-';
    return s;
}

void svg_header(std::ofstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">"
        << title << "</text>\n";
}

void axes(std::ofstream& out, const std::string& xlabel, const std::string& ylabel) {
    int x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    int y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xlabel
        << "</text>\n"
        << "<text x=\"16\" y=\"" << (y0 + y1) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 16 "
        << (y0 + y1) / 2 << ")\">" << ylabel << "</text>\n";
}

} // namespace

void render_relative_phase_chart(const RunResult& run, const std::string& path) {
    const RunTrace& trace = run.trace;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write chart: " + path);

    std::string title = run.key.experiment + " / " + to_string(run.key.protocol) + " / " +
                        run.key.topology + " / T=" + num(run.key.period_ms) +
                        " / seed=" + std::to_string(run.key.seed);
    svg_header(out, title);
    axes(out, "period", "phase relative to node 0 (ms)");

    double plot_w = kWidth - kMarginLeft - kMarginRight;
    double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto x_of = [&](int period) {
        return kMarginLeft + plot_w * (trace.periods <= 1 ? 0.0
                                                          : static_cast<double>(period) /
                                                                (trace.periods - 1));
    };
    auto y_of = [&](double rel) {
        return kMarginTop + plot_h * (1.0 - rel / trace.period_ms);
    };

    for (int tick = 0; tick <= 4; ++tick) {
        double rel = trace.period_ms * tick / 4.0;
        out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << y_of(rel) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << num(rel)
            << "</text>\n";
    }

    for (int node = 0; node < trace.node_count; ++node) {
        out << "<polyline fill=\"none\" stroke=\"" << color_for(node)
            << "\" stroke-width=\"1\" points=\"";
        for (int p = 0; p < trace.periods; ++p) {
            double rel = mod_pos(trace.phases[p][node] - trace.phases[p][0], trace.period_ms);
            out << num(x_of(p)) << ',' << num(y_of(rel)) << ' ';
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

void render_error_chart(const ResultsBundle& bundle, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write chart: " + path);

    // Mean final NRMSE per (topology, protocol).
    std::vector<std::string> topo_order;
    std::map<std::string, std::map<std::string, std::pair<double, int>>> sums;
    for (const auto& run : bundle.runs) {
        std::string topo = run.key.topology + " T=" + num(run.key.period_ms);
        if (!sums.count(topo)) topo_order.push_back(topo);
        auto& cell = sums[topo][to_string(run.key.protocol)];
        cell.first += run.metrics.nrmse;
        cell.second += 1;
    }

    svg_header(out, bundle.spec.name + ": mean final NRMSE");
    axes(out, "topology", "NRMSE");

    double max_val = 0.0;
    for (const auto& [topo, protos] : sums)
        for (const auto& [proto, cell] : protos)
            max_val = std::max(max_val, cell.first / cell.second);
    if (max_val <= 0.0) max_val = 1.0;

    double plot_w = kWidth - kMarginLeft - kMarginRight;
    double plot_h = kHeight - kMarginTop - kMarginBottom;
    double group_w = plot_w / std::max<std::size_t>(1, topo_order.size());

    int proto_index = 0;
    std::map<std::string, int> proto_slot;
    for (const auto& run : bundle.runs)
        if (proto_slot.try_emplace(to_string(run.key.protocol), proto_index).second)
            ++proto_index;

    for (std::size_t g = 0; g < topo_order.size(); ++g) {
        const auto& protos = sums[topo_order[g]];
        double bar_w = group_w / (proto_slot.size() + 1);
        for (const auto& [proto, cell] : protos) {
            double value = cell.first / cell.second;
            double h = plot_h * value / max_val;
            double x = kMarginLeft + group_w * g + bar_w * (proto_slot[proto] + 0.5);
            double y = kMarginTop + plot_h - h;
            out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(bar_w * 0.9)
                << "\" height=\"" << num(h) << "\" fill=\"" << color_for(proto_slot[proto])
                << "\"><title>" << proto << ' ' << topo_order[g] << ": " << value
                << "</title></rect>\n";
        }
        out << "<text x=\"" << num(kMarginLeft + group_w * (g + 0.5)) << "\" y=\""
            << kHeight - kMarginBottom + 16
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"9\">"
            << topo_order[g] << "</text>\n";
    }
    for (const auto& [proto, slot] : proto_slot) {
        out << "<rect x=\"" << kWidth - 170 << "\" y=\"" << kMarginTop + 16 * slot
            << "\" width=\"10\" height=\"10\" fill=\"" << color_for(slot) << "\"/>\n"
            << "<text x=\"" << kWidth - 155 << "\" y=\"" << kMarginTop + 16 * slot + 9
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << proto << "</text>\n";
    }
    out << "</svg>\n";
}

std::vector<std::string> render_charts(const ResultsBundle& bundle, const std::string& dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> written;
    if (bundle.runs.empty()) {
        std::cerr << "warning: empty bundle, no charts rendered\n";
        return written;
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create chart directory: " + dir);

    for (const auto& run : bundle.runs) {
        std::string name = sanitize(to_string(run.key.protocol) + "_" + run.key.topology + "_T" +
                                    num(run.key.period_ms) + "_b" + std::to_string(run.key.beta) +
                                    "_s" + std::to_string(run.key.seed)) +
                           ".svg";
        fs::path path = fs::path(dir) / name;
        render_relative_phase_chart(run, path.string());
        written.push_back(path.string());
    }
    fs::path err_path = fs::path(dir) / (sanitize(bundle.spec.name) + "_nrmse.svg");
    render_error_chart(bundle, err_path.string());
    written.push_back(err_path.string());
    return written;
}

} // namespace desync
