#include "crc/io.hpp"

#include "json.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace crc {

const char* kCsvSchemaHeader = "# crcsim-csv v1";

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    return cells;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line_no,
                             const std::string& what) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

YieldPanel load_yield_panel(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open yield panel: " + path.string());

    YieldPanel panel;
    std::string line;
    std::size_t line_no = 0;

    // header (an optional schema comment line may precede it)
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') continue;
        break;
    }
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "date") {
        parse_fail(path, line_no, "header must be 'date,tau_<maturity>,...'");
    }
    for (std::size_t i = 1; i < header.size(); ++i) {
        if (header[i].rfind("tau_", 0) != 0) {
            parse_fail(path, line_no, "bad maturity column '" + header[i] + "'");
        }
        try {
            panel.maturities.push_back(std::stod(header[i].substr(4)));
        } catch (const std::exception&) {
            parse_fail(path, line_no, "bad maturity column '" + header[i] + "'");
        }
    }

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            parse_fail(path, line_no, "expected " + std::to_string(header.size()) + " cells, got " +
                                          std::to_string(cells.size()));
        }
        if (!panel.dates.empty() && !(panel.dates.back() < cells[0])) {
            parse_fail(path, line_no, panel.dates.back() == cells[0]
                                          ? "duplicated date " + cells[0]
                                          : "dates must be strictly increasing at " + cells[0]);
        }
        panel.dates.push_back(cells[0]);
        for (std::size_t i = 1; i < cells.size(); ++i) {
            if (cells[i].empty()) {
                panel.yields.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            try {
                panel.yields.push_back(std::stod(cells[i]));
            } catch (const std::exception&) {
                parse_fail(path, line_no, "bad number '" + cells[i] + "'");
            }
        }
    }
    panel.validate();
    return panel;
}

void write_yield_panel(const YieldPanel& panel, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << kCsvSchemaHeader << "\n";
    out << "date";
    for (double m : panel.maturities) out << ",tau_" << format_double(m);
    out << "\n";
    for (std::size_t t = 0; t < panel.rows(); ++t) {
        out << panel.dates[t];
        for (std::size_t i = 0; i < panel.cols(); ++i) {
            const double v = panel.at(t, i);
            out << ",";
            if (std::isfinite(v)) out << format_double(v);
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_ensemble_csv(const PathEnsemble& ensemble, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << kCsvSchemaHeader << "\n";
    out << "path,step,t,r,B";
    for (double tau : ensemble.report_taus) out << ",yield_" << format_double(tau);
    out << ",y_vol,y_beta,rejected\n";
    const std::size_t ntau = ensemble.report_taus.size();
    for (std::size_t p = 0; p < ensemble.paths.size(); ++p) {
        const auto& rec = ensemble.paths[p];
        for (std::size_t k = 0; k < rec.times.size(); ++k) {
            out << p << "," << std::llround(rec.times[k] / ensemble.delta) << ","
                << format_double(rec.times[k]) << "," << format_double(rec.r[k]) << ","
                << format_double(rec.bank[k]);
            for (std::size_t i = 0; i < ntau; ++i) {
                out << "," << format_double(rec.yields[k * ntau + i]);
            }
            out << "," << format_double(rec.y_vol[k]) << "," << format_double(rec.y_beta[k])
                << "," << (rec.rejected ? 1 : 0) << "\n";
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

void put_u32(std::ofstream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ofstream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ofstream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

}  // namespace

void write_ensemble_binary(const PathEnsemble& ensemble, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write("CRCENS01", 8);
    put_u32(out, 1);  // version
    put_u64(out, ensemble.paths.size());
    put_u64(out, ensemble.n_steps);
    put_f64(out, ensemble.delta);
    put_u64(out, ensemble.report_taus.size());
    for (double tau : ensemble.report_taus) put_f64(out, tau);
    for (const auto& rec : ensemble.paths) {
        put_u64(out, rec.times.size());
        put_u32(out, rec.rejected ? 1u : 0u);
        put_f64(out, rec.reject_time);
        put_f64(out, rec.reject_theta0);
        for (std::size_t k = 0; k < rec.times.size(); ++k) {
            put_f64(out, rec.times[k]);
            put_f64(out, rec.r[k]);
            put_f64(out, rec.bank[k]);
            for (std::size_t i = 0; i < ensemble.report_taus.size(); ++i) {
                put_f64(out, rec.yields[k * ensemble.report_taus.size() + i]);
            }
            put_f64(out, rec.y_vol[k]);
            put_f64(out, rec.y_beta[k]);
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string file_checksum(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for checksum: " + path.string());
    std::uint64_t hash = 0xcbf29ce484222325ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 0x100000001b3ull;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    std::ostringstream os;
    os << std::hex << hash;
    return "fnv1a64:" + os.str();
}

void RunManifest::write(const std::filesystem::path& path) const {
    json j;
    j["schema"] = "crcsim-manifest-v1";
    j["command"] = command;
    j["config"] = json::parse(config_json.empty() ? "{}" : config_json);
    j["seed"] = seed;
    j["build"] = build;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

RunManifest RunManifest::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path.string());
    json j;
    in >> j;
    if (j.value("schema", "") != "crcsim-manifest-v1") {
        throw std::runtime_error("unsupported manifest schema in " + path.string());
    }
    RunManifest m;
    m.command = j.value("command", "");
    m.config_json = j["config"].dump();
    m.seed = j.value("seed", std::uint64_t{0});
    m.build = j.value("build", "");
    if (j.contains("inputs")) m.inputs = j["inputs"].get<std::map<std::string, std::string>>();
    if (j.contains("outputs")) m.outputs = j["outputs"].get<std::map<std::string, std::string>>();
    return m;
}

}  // namespace crc
