#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace trispin {

// CSV with a header row, '.' decimal separator and 17 significant digits, so
// repeated runs with the same seed are byte identical.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void header(const std::vector<std::string>& names) {
        for (size_t i = 0; i < names.size(); ++i) os_ << (i ? "," : "") << names[i];
        os_ << '\n';
    }

    CsvWriter& field(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        sep();
        os_ << buf;
        return *this;
    }
    CsvWriter& field(int v) {
        sep();
        os_ << v;
        return *this;
    }
    CsvWriter& field(const std::string& v) {
        sep();
        os_ << v;
        return *this;
    }
    void endrow() {
        os_ << '\n';
        first_ = true;
    }

private:
    void sep() {
        if (!first_) os_ << ',';
        first_ = false;
    }
    std::ostream& os_;
    bool first_ = true;
};

inline std::string format_complex(std::complex<double> v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.real(), v.imag());
    return buf;
}

// Flat key-value configuration text: one "key value" or "key = value" pair
// per line, '#' comments.
inline std::map<std::string, std::string> read_config(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        std::string rest;
        std::getline(ls, rest);
        // strip optional '=' and surrounding blanks
        size_t b = rest.find_first_not_of(" \t=");
        size_t e = rest.find_last_not_of(" \t\r");
        kv[key] = (b == std::string::npos) ? "" : rest.substr(b, e - b + 1);
    }
    return kv;
}

inline std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    return read_config(f);
}

} // namespace trispin
