#include "hyperell/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace hyperell {

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    for (auto& kv : entries_)
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    entries_.emplace_back(key, value);
}

void ExperimentConfig::set(const std::string& key, double value) { set(key, format_double(value)); }
void ExperimentConfig::set(const std::string& key, long long value) { set(key, std::to_string(value)); }

bool ExperimentConfig::has(const std::string& key) const {
    for (const auto& kv : entries_)
        if (kv.first == key) return true;
    return false;
}

const std::string& ExperimentConfig::get(const std::string& key) const {
    for (const auto& kv : entries_)
        if (kv.first == key) return kv.second;
    throw std::out_of_range("ExperimentConfig: missing key '" + key + "'");
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream os;
    for (const auto& kv : entries_) os << kv.first << " = " << kv.second << "\n";
    return os.str();
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto strip = [](std::string s) {
            size_t b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            size_t e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + line);
        cfg.set(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return cfg;
}

std::string format_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("report: non-finite value");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_or_inf(double v) {
    if (std::isinf(v) && v > 0) return "inf";
    return format_double(v);
}

void CsvWriter::comment(const std::string& line) {
    out_ += "# ";
    out_ += line;
    out_ += "\n";
}

void CsvWriter::header(const std::vector<std::string>& cols) {
    ncols_ = cols.size();
    row(cols);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (ncols_ && fields.size() != ncols_) throw std::invalid_argument("CsvWriter: column count mismatch");
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ += ',';
        out_ += escape(fields[i]);
    }
    out_ += "\n";
}

std::string CsvWriter::escape(const std::string& f) {
    if (f.find_first_of(",\"\n") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string CsvWriter::str() const { return out_; }

} // namespace hyperell
