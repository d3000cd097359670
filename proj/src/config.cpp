#include "desync/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace desync {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line, section = "run";
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        kv[section + "." + key] = value;
    }
    return kv;
}

void apply_override(ExperimentSpec& spec, const std::string& key, const std::string& value) {
    if (key == "run.name") {
        spec.name = value;
    } else if (key == "run.protocols") {
        spec.protocols.clear();
        for (const auto& p : split_list(value)) spec.protocols.push_back(parse_protocol(p));
    } else if (key == "run.topologies") {
        spec.topologies = split_list(value);
    } else if (key == "run.T") {
        spec.periods_ms.clear();
        for (const auto& t : split_list(value)) spec.periods_ms.push_back(std::stod(t));
    } else if (key == "run.periods") {
        spec.periods = std::stoi(value);
    } else if (key == "run.seeds") {
        spec.seeds = std::stoi(value);
    } else if (key == "run.base_seed") {
        spec.base_seed = std::stoull(value);
    } else if (key == "run.beta") {
        spec.betas.clear();
        for (const auto& b : split_list(value)) spec.betas.push_back(std::stoi(b));
    } else if (key == "run.out") {
        spec.out_dir = value;
    } else if (key == "run.bitrate") {
        spec.bitrate_bps = std::stod(value);
    } else if (key == "mdwarf.c1") {
        spec.proto.mdwarf.c1 = std::stod(value);
    } else if (key == "mdwarf.c2") {
        spec.proto.mdwarf.c2 = std::stod(value);
    } else if (key == "mdwarf.eps_abs_frac") {
        spec.proto.mdwarf.eps_abs_frac = std::stod(value);
    } else if (key == "mdwarf.eps_min_frac") {
        spec.proto.mdwarf.eps_min_frac = std::stod(value);
    } else if (key == "extdesync.alpha") {
        spec.proto.extdesync.alpha = std::stod(value);
    } else if (key == "lightweight.guard_ms") {
        spec.proto.lightweight.guard_ms = std::stod(value);
    } else if (key == "metrics.delta_stab_frac") {
        spec.metrics.delta_stab_frac = std::stod(value);
    } else if (key == "metrics.window") {
        spec.metrics.window = std::stoi(value);
    } else if (key == "metrics.eps_slot_frac") {
        spec.metrics.eps_slot_frac = std::stod(value);
    } else {
        throw std::invalid_argument("unknown config key: " + key);
    }
}

ExperimentSpec spec_from_config(const std::map<std::string, std::string>& kv) {
    ExperimentSpec spec;
    spec.name = "experiment";
    for (const auto& [key, value] : kv) apply_override(spec, key, value);
    if (spec.out_dir == "results") spec.out_dir = "results/" + spec.name;
    return spec;
}

ExperimentSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return spec_from_config(parse_config_text(buf.str()));
}

} // namespace desync
