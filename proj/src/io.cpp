#include "lgsim/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lgsim/errors.hpp"

namespace lgsim {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    return f;
}

} // namespace

void write_crosstalk_csv(const std::filesystem::path& path, const CrosstalkMatrix& m) {
    auto f = open_out(path);
    f << "input\\detector";
    for (const auto& label : m.labels) f << ',' << label;
    f << '\n';
    const int d = m.dimension();
    for (int i = 0; i < d; ++i) {
        f << m.labels[i];
        for (int j = 0; j < d; ++j) f << ',' << format_double(m.at(i, j));
        f << '\n';
    }
}

CrosstalkMatrix read_crosstalk_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open crosstalk CSV " + path.string());
    std::string line;
    if (!std::getline(f, line)) throw Error("empty crosstalk CSV " + path.string());
    auto header = split_csv_line(line);
    if (header.size() < 2) throw Error("crosstalk CSV header needs at least one label");
    std::vector<std::string> labels(header.begin() + 1, header.end());
    const auto d = labels.size();

    std::vector<double> values;
    values.reserve(d * d);
    size_t row = 0;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != d + 1)
            throw Error("crosstalk CSV row " + std::to_string(row + 2) + " has " +
                        std::to_string(cells.size()) + " cells, expected " + std::to_string(d + 1));
        if (row >= d) throw Error("crosstalk CSV has more rows than labels");
        if (cells[0] != labels[row])
            throw Error("crosstalk CSV row label '" + cells[0] + "' does not match header '" +
                        labels[row] + "'");
        for (size_t j = 1; j < cells.size(); ++j) {
            double v = 0.0;
            const auto* first = cells[j].data();
            const auto* last = first + cells[j].size();
            const auto rc = std::from_chars(first, last, v);
            if (rc.ec != std::errc{} || rc.ptr != last)
                throw Error("crosstalk CSV: bad number '" + cells[j] + "'");
            values.push_back(v);
        }
        ++row;
    }
    if (row != d) throw Error("crosstalk CSV has " + std::to_string(row) + " rows, expected " +
                              std::to_string(d));
    return CrosstalkMatrix(std::move(labels), std::move(values));
}

void write_crosstalk_sidecar(const std::filesystem::path& path, const CrosstalkMatrix& m) {
    json j;
    j["labels"] = m.labels;
    j["method"] = method_name(m.model.method);
    j["beta"] = m.model.beta;
    j["grid"] = {{"n_radial", m.model.grid.n_radial},
                 {"n_azimuthal", m.model.grid.n_azimuthal},
                 {"r_max", m.model.grid.r_max}};
    j["waist"] = m.waist;
    j["visibility"] = visibility(m);
    j["mean_efficiency"] = mean_efficiency(m);
    auto f = open_out(path);
    f << j.dump(2) << '\n';
}

SpatialState load_state_json(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open state file " + path.string());
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw Error("state file " + path.string() + ": " + e.what());
    }
    if (!j.contains("support") || !j.contains("coeffs") || !j.contains("waist"))
        throw Error("state file needs 'support', 'coeffs', and 'waist'");
    std::vector<ModeIndex> modes;
    for (const auto& tok : j["support"]) modes.push_back(parse_mode_token(tok.get<std::string>()));
    std::vector<std::complex<double>> coeffs;
    for (const auto& c : j["coeffs"]) {
        if (!c.is_array() || c.size() != 2) throw Error("state coeffs must be [re, im] pairs");
        coeffs.emplace_back(c[0].get<double>(), c[1].get<double>());
    }
    if (coeffs.size() != modes.size())
        throw Error("state file: support and coeffs lengths differ");
    double norm2 = 0.0;
    for (const auto& c : coeffs) norm2 += std::norm(c);
    if (norm2 <= 0.0) throw Error("state file: zero coefficient vector");
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : coeffs) c *= inv;
    return SpatialState(std::move(modes), std::move(coeffs), j["waist"].get<double>());
}

void save_state_json(const std::filesystem::path& path, const SpatialState& state) {
    json j;
    for (const auto& m : state.modes) j["support"].push_back(mode_token(m));
    for (const auto& c : state.coeffs) j["coeffs"].push_back({c.real(), c.imag()});
    j["waist"] = state.waist;
    auto f = open_out(path);
    f << j.dump(2) << '\n';
}

void write_density_json(const std::filesystem::path& path, const DensityMatrix& rho,
                        const std::vector<ModeIndex>& support) {
    json j;
    j["dimension"] = rho.dimension;
    for (const auto& m : support) j["support"].push_back(mode_token(m));
    auto& rows = j["rho"];
    for (int i = 0; i < rho.dimension; ++i) {
        json row = json::array();
        for (int k = 0; k < rho.dimension; ++k) {
            const auto v = rho.at(i, k);
            row.push_back({v.real(), v.imag()});
        }
        rows.push_back(std::move(row));
    }
    auto f = open_out(path);
    f << j.dump(2) << '\n';
}

void write_density_abs_csv(const std::filesystem::path& path, const DensityMatrix& rho) {
    auto f = open_out(path);
    for (int i = 0; i < rho.dimension; ++i) {
        for (int j = 0; j < rho.dimension; ++j) {
            if (j) f << ',';
            f << format_double(std::abs(rho.at(i, j)));
        }
        f << '\n';
    }
}

} // namespace lgsim
