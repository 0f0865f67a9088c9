#include "qsp/phase_file.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qsp {

namespace {

using nlohmann::json;

void append_double(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

void append_array(std::string& out, const std::vector<double>& values,
                  const std::string& item_indent, const std::string& close_indent) {
    out += "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i % 4 == 0) {
            out += "\n";
            out += item_indent;
        } else {
            out += " ";
        }
        append_double(out, values[i]);
        if (i + 1 < values.size()) out += ",";
    }
    out += "\n";
    out += close_indent;
    out += "]";
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_phase_file(const std::string& path, const PhaseFileV1& file) {
    std::string out;
    out += "{\n";
    out += "  \"format\": \"qsp-phase-file\",\n";
    out += "  \"version\": " + std::to_string(file.version) + ",\n";
    out += "  \"target_kind\": \"" + file.target_kind + "\",\n";
    out += "  \"method\": \"" + file.method + "\",\n";
    out += "  \"target_params\": {";
    {
        bool first = true;
        for (const auto& [key, value] : file.target_params) {
            out += first ? "\n" : ",\n";
            out += "    \"" + key + "\": ";
            append_double(out, value);
            first = false;
        }
        out += "\n  },\n";
    }
    out += "  \"scale_divisor\": ";
    append_double(out, file.scale_divisor);
    out += ",\n";
    out += std::string("  \"failed\": ") + (file.failed ? "true" : "false") + ",\n";
    out += "  \"parts\": [";
    for (std::size_t p = 0; p < file.parts.size(); ++p) {
        const PhaseFilePart& part = file.parts[p];
        out += "\n    {\n";
        out += "      \"label\": \"" + part.label + "\",\n";
        out += std::string("      \"parity\": \"") + to_string(part.parity) + "\",\n";
        out += "      \"degree\": " + std::to_string(part.degree) + ",\n";
        out += "      \"converged\": " + std::string(part.converged ? "true" : "false") + ",\n";
        out += "      \"iterations\": " + std::to_string(part.iterations) + ",\n";
        out += "      \"max_node_error\": ";
        append_double(out, part.max_node_error);
        out += ",\n      \"linf_error_vs_function\": ";
        append_double(out, part.linf_error_vs_function);
        out += ",\n      \"wall_time_seconds\": ";
        append_double(out, part.wall_time_seconds);
        out += ",\n      \"phases\": ";
        append_array(out, part.phases, "        ", "      ");
        out += ",\n      \"target_coeffs\": ";
        append_array(out, part.target_coeffs, "        ", "      ");
        out += "\n    }";
        if (p + 1 < file.parts.size()) out += ",";
    }
    out += file.parts.empty() ? "],\n" : "\n  ],\n";
    out += "  \"end\": true\n";
    out += "}\n";

    const std::string tmp = path + ".tmp";
    {
        std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
        if (!stream) throw std::runtime_error("cannot open " + tmp + " for writing");
        stream << out;
        if (!stream.good()) throw std::runtime_error("short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

PhaseFileV1 read_phase_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw std::runtime_error("cannot open " + path);
    json doc;
    try {
        doc = json::parse(stream);
    } catch (const json::exception& e) {
        throw std::runtime_error("corrupt phase file " + path + ": " + e.what());
    }
    try {
        PhaseFileV1 file;
        if (doc.at("format").get<std::string>() != "qsp-phase-file") {
            throw std::runtime_error("not a phase file");
        }
        file.version = doc.at("version").get<int>();
        if (file.version != 1) throw std::runtime_error("unsupported version");
        file.target_kind = doc.at("target_kind").get<std::string>();
        file.method = doc.value("method", std::string{});
        for (const auto& [key, value] : doc.at("target_params").items()) {
            file.target_params[key] = value.get<double>();
        }
        file.scale_divisor = doc.at("scale_divisor").get<double>();
        file.failed = doc.at("failed").get<bool>();
        for (const auto& jp : doc.at("parts")) {
            PhaseFilePart part;
            part.label = jp.at("label").get<std::string>();
            part.parity = parity_from_string(jp.at("parity").get<std::string>());
            part.degree = jp.at("degree").get<int>();
            part.converged = jp.at("converged").get<bool>();
            part.iterations = jp.at("iterations").get<long>();
            part.max_node_error = jp.at("max_node_error").get<double>();
            part.linf_error_vs_function = jp.at("linf_error_vs_function").get<double>();
            part.wall_time_seconds = jp.at("wall_time_seconds").get<double>();
            part.phases = jp.at("phases").get<std::vector<double>>();
            part.target_coeffs = jp.at("target_coeffs").get<std::vector<double>>();
            if (static_cast<int>(part.phases.size()) != part.degree + 1) {
                throw std::runtime_error("phase count does not match degree");
            }
            file.parts.push_back(std::move(part));
        }
        return file;
    } catch (const json::exception& e) {
        throw std::runtime_error("corrupt phase file " + path + ": " + e.what());
    }
}

ChebSeries read_coeff_file(const std::string& path) {
    std::ifstream stream(path);
    if (!stream) throw std::runtime_error("cannot open " + path);
    std::string header;
    if (!std::getline(stream, header)) throw std::runtime_error("empty coefficient file " + path);
    const auto colon = header.find(':');
    if (colon == std::string::npos || header.substr(0, colon) != "parity") {
        throw std::runtime_error("coefficient file must start with 'parity: even|odd'");
    }
    std::string tag = header.substr(colon + 1);
    tag.erase(0, tag.find_first_not_of(" \t"));
    tag.erase(tag.find_last_not_of(" \t\r") + 1);

    ChebSeries series;
    series.parity = parity_from_string(tag);
    std::string line;
    while (std::getline(stream, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        double v;
        try {
            v = std::stod(line);
        } catch (const std::exception&) {
            throw std::runtime_error("bad coefficient line: " + line);
        }
        series.coeffs.push_back(v);
    }
    if (series.coeffs.empty()) throw std::runtime_error("coefficient file has no coefficients");
    return with_parity(std::move(series), series.parity);
}

void write_coeff_file(const std::string& path, const ChebSeries& series) {
    std::ofstream stream(path, std::ios::trunc);
    if (!stream) throw std::runtime_error("cannot open " + path + " for writing");
    stream << "parity: " << to_string(series.parity) << "\n";
    for (double c : series.coeffs) stream << format_double(c) << "\n";
    if (!stream.good()) throw std::runtime_error("short write to " + path);
}

}  // namespace qsp
