#ifndef HYPERELL_REPORT_HPP
#define HYPERELL_REPORT_HPP

#include <map>
#include <string>
#include <vector>

namespace hyperell {

/// Resolved run configuration: ordered key = value pairs that round-trip
/// losslessly through the line-oriented text format ('#' comments allowed).
class ExperimentConfig {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, long long value);
    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;

    std::string to_text() const;
    static ExperimentConfig from_text(const std::string& text);

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Formats a double with 17 significant digits (round-trip exact).
/// Non-finite values are rejected except by format_or_inf, which renders
/// +infinity as the literal "inf" (the c_v convention).
std::string format_double(double v);
std::string format_or_inf(double v);

/// RFC-style CSV: mandatory header, quoting when a field contains
/// comma/quote/newline, '#'-prefixed comment lines for the embedded config.
class CsvWriter {
public:
    void comment(const std::string& line);
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<std::string>& fields);
    std::string str() const;

private:
    static std::string escape(const std::string& f);
    size_t ncols_ = 0;
    std::string out_;
};

} // namespace hyperell

#endif
