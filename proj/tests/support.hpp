#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcv/parser.hpp"

namespace rcvtest {

inline std::string source_dir() { return RCV_SOURCE_DIR; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string model_path(const std::string& name) {
    return source_dir() + "/models/" + name;
}

inline rcv::StMach load_model(const std::string& name) {
    return rcv::parse(slurp(model_path(name)));
}

// The whole good corpus, kept in sync with models/.
inline const std::vector<std::string>& corpus() {
    static const std::vector<std::string> names = {
        "counter.rcsm",          "counter_total.rcsm", "enum_router.rcsm",
        "enum_router_missing.rcsm", "eps_only.rcsm",   "final_stop.rcsm",
        "gas_analysis.rcsm",     "gas_analysis_3status.rcsm", "guarded_io.rcsm",
        "io_echo.rcsm",          "minimal.rcsm",       "output_only.rcsm",
        "stuck.rcsm",            "toggle.rcsm",        "two_path_entry.rcsm",
    };
    return names;
}

}  // namespace rcvtest
