#include "rlf/touchstone.hpp"

#include "rlf/error.hpp"
#include "rlf/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace rlf {

namespace {

constexpr double deg = std::numbers::pi / 180.0;
constexpr double min_db = -400.0;

struct DataLine {
    std::size_t line;
    std::vector<double> values;
};

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

std::vector<std::string_view> tokens(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) {
            ++j;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

double number(std::string_view tok, std::size_t line) {
    if (!tok.empty() && tok.front() == '+') {
        tok.remove_prefix(1);
    }
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(x)) {
        throw ParseError(fmt::format("'{}' is not a finite number", tok), line);
    }
    return x;
}

TouchstoneOptions parse_option_line(std::string_view body, std::size_t line) {
    TouchstoneOptions o;
    const auto toks = tokens(body);
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const auto t = upper(toks[i]);
        if (t == "HZ") {
            o.unit = FrequencyUnit::Hz;
        } else if (t == "KHZ") {
            o.unit = FrequencyUnit::kHz;
        } else if (t == "MHZ") {
            o.unit = FrequencyUnit::MHz;
        } else if (t == "GHZ") {
            o.unit = FrequencyUnit::GHz;
        } else if (t == "RI") {
            o.format = DataFormat::RI;
        } else if (t == "MA") {
            o.format = DataFormat::MA;
        } else if (t == "DB") {
            o.format = DataFormat::DB;
        } else if (t == "S") {
        } else if (t == "Y" || t == "Z" || t == "H" || t == "G") {
            throw ParseError(fmt::format("only S parameters are supported, found '{}'", toks[i]), line);
        } else if (t == "R") {
            if (i + 1 >= toks.size()) {
                throw ParseError("option 'R' needs a value", line);
            }
            o.reference_ohms = number(toks[++i], line);
            if (o.reference_ohms <= 0.0) {
                throw ParseError("reference resistance must be > 0", line);
            }
        } else {
            throw ParseError(fmt::format("unknown option '{}'", toks[i]), line);
        }
    }
    return o;
}

std::size_t infer_ports(const std::vector<DataLine>& data) {
    const auto first = data.front().values.size();
    switch (first) {
    case 3:
        return 1;
    case 7:
        return 3;
    case 9:
        return data.size() > 1 && data[1].values.size() == 8 ? 4 : 2;
    default:
        throw ParseError(fmt::format("cannot infer port count from {} columns", first), data.front().line);
    }
}

Complex decode(double a, double b, DataFormat f) {
    switch (f) {
    case DataFormat::RI:
        return {a, b};
    case DataFormat::MA:
        return std::polar(a, b * deg);
    case DataFormat::DB:
        return std::polar(std::pow(10.0, a / 20.0), b * deg);
    }
    return {};
}

std::pair<double, double> encode(Complex z, DataFormat f) {
    switch (f) {
    case DataFormat::RI:
        return {z.real(), z.imag()};
    case DataFormat::MA:
        return {std::abs(z), std::arg(z) / deg};
    case DataFormat::DB:
        return {std::max(to_db(z), min_db), std::arg(z) / deg};
    }
    return {};
}

const char* unit_name(FrequencyUnit u) {
    switch (u) {
    case FrequencyUnit::Hz:
        return "Hz";
    case FrequencyUnit::kHz:
        return "kHz";
    case FrequencyUnit::MHz:
        return "MHz";
    case FrequencyUnit::GHz:
        return "GHz";
    }
    return "GHz";
}

const char* format_name(DataFormat f) {
    switch (f) {
    case DataFormat::RI:
        return "RI";
    case DataFormat::MA:
        return "MA";
    case DataFormat::DB:
        return "DB";
    }
    return "MA";
}

// Touchstone v1 stores 2-ports column-major (S11 S21 S12 S22), everything else row-major.
std::pair<Eigen::Index, Eigen::Index> entry_at(std::size_t flat, std::size_t ports) {
    const auto n = static_cast<Eigen::Index>(ports);
    const auto i = static_cast<Eigen::Index>(flat);
    if (ports == 2) {
        return {i % n, i / n};
    }
    return {i / n, i % n};
}

}  // namespace

double unit_scale(FrequencyUnit unit) {
    switch (unit) {
    case FrequencyUnit::Hz:
        return 1.0;
    case FrequencyUnit::kHz:
        return 1e3;
    case FrequencyUnit::MHz:
        return 1e6;
    case FrequencyUnit::GHz:
        return 1e9;
    }
    return 1.0;
}

TouchstoneFile parse_touchstone(std::string_view text, std::optional<std::size_t> ports) {
    std::optional<TouchstoneOptions> options;
    std::vector<std::string> comments;
    std::vector<DataLine> data;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto bang = line.find('!'); bang != std::string_view::npos) {
            auto c = line.substr(bang + 1);
            while (!c.empty() && (c.back() == '\r' || c.back() == ' ')) {
                c.remove_suffix(1);
            }
            comments.emplace_back(c);
            line = line.substr(0, bang);
        }
        const auto toks = tokens(line);
        if (toks.empty()) {
            continue;
        }
        if (toks.front().front() == '#') {
            if (options) {
                throw ParseError("duplicate option line", line_no);
            }
            if (!data.empty()) {
                throw ParseError("option line after data", line_no);
            }
            options = parse_option_line(line.substr(line.find('#') + 1), line_no);
            continue;
        }
        if (toks.front().front() == '[') {
            throw ParseError("Touchstone v2 keywords are not supported", line_no);
        }
        DataLine d{line_no, {}};
        d.values.reserve(toks.size());
        for (auto t : toks) {
            d.values.push_back(number(t, line_no));
        }
        data.push_back(std::move(d));
    }
    if (data.empty()) {
        throw ParseError("no data lines");
    }
    const TouchstoneOptions opt = options.value_or(TouchstoneOptions{});
    const std::size_t n = ports ? *ports : infer_ports(data);
    if (n == 0) {
        throw InvalidArgument("port count must be >= 1");
    }
    const std::size_t record = 1 + 2 * n * n;
    const double scale = unit_scale(opt.unit);

    std::vector<double> freqs;
    std::vector<CMatrix> mats;
    std::vector<double> buf;
    std::size_t record_line = 0;
    auto finish = [&] {
        const double f = buf.front() * scale;
        if (f <= 0.0) {
            throw ParseError(fmt::format("frequency {} must be > 0", buf.front()), record_line);
        }
        if (!freqs.empty() && f <= freqs.back()) {
            throw ParseError("frequencies must be strictly increasing", record_line);
        }
        CMatrix s(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t e = 0; e < n * n; ++e) {
            const auto [r, c] = entry_at(e, n);
            s(r, c) = decode(buf[1 + 2 * e], buf[2 + 2 * e], opt.format);
        }
        freqs.push_back(f);
        mats.push_back(std::move(s));
        buf.clear();
    };
    for (const auto& d : data) {
        if (buf.empty()) {
            record_line = d.line;
            if (n <= 2 && d.values.size() != record) {
                throw ParseError(fmt::format("expected {} columns, found {}", record, d.values.size()), d.line);
            }
        }
        buf.insert(buf.end(), d.values.begin(), d.values.end());
        if (buf.size() > record) {
            throw ParseError(fmt::format("record starting on line {} has too many values", record_line), d.line);
        }
        if (buf.size() == record) {
            finish();
        }
    }
    if (!buf.empty()) {
        throw ParseError(fmt::format("incomplete record: {} of {} values", buf.size(), record), data.back().line);
    }
    return TouchstoneFile{NetworkData(FrequencyGrid(std::move(freqs)), std::move(mats), opt.reference_ohms), opt,
                          std::move(comments)};
}

TouchstoneFile read_touchstone(const std::filesystem::path& path) {
    std::optional<std::size_t> ports;
    const auto ext = upper(path.extension().string());
    if (ext.size() >= 4 && ext[1] == 'S' && ext.back() == 'P') {
        std::size_t n = 0;
        const auto digits = std::string_view(ext).substr(2, ext.size() - 3);
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec == std::errc() && ptr == digits.data() + digits.size() && n > 0) {
            ports = n;
        }
    }
    const auto text = read_text_file(path);
    try {
        return parse_touchstone(text, ports);
    } catch (const ParseError& e) {
        throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::string write_touchstone(const NetworkData& n, const TouchstoneOptions& options,
                             const std::vector<std::string>& comments) {
    if (!n.uniform_z0()) {
        throw InvalidArgument("Touchstone v1 needs one reference impedance for all ports");
    }
    std::string out;
    for (const auto& c : comments) {
        out += "! " + c + "\n";
    }
    out += fmt::format("# {} S {} R {:.17g}\n", unit_name(options.unit), format_name(options.format), n.z0(0));
    const double scale = unit_scale(options.unit);
    const std::size_t p = n.ports();
    for (std::size_t k = 0; k < n.size(); ++k) {
        out += fmt::format("{:.17g}", n.grid()[k] / scale);
        for (std::size_t e = 0; e < p * p; ++e) {
            const auto [r, c] = entry_at(e, p);
            if (p > 2 && e > 0 && (e % p == 0 || (e % p) % 4 == 0)) {
                out += "\n";
            }
            const auto [a, b] = encode(n.s(k)(r, c), options.format);
            out += fmt::format(" {:.17g} {:.17g}", a, b);
        }
        out += '\n';
    }
    return out;
}

void save_touchstone(const std::filesystem::path& path, const NetworkData& n, const TouchstoneOptions& options) {
    write_text_file(path, write_touchstone(n, options));
}

std::string sparam_name(std::size_t to, std::size_t from) {
    if (to < 9 && from < 9) {
        return fmt::format("S{}{}", to + 1, from + 1);
    }
    return fmt::format("S{}_{}", to + 1, from + 1);
}

CsvTable response_table(const NetworkData& n, const std::vector<SParamSelection>& selection,
                        const CsvColumns& columns) {
    CsvTable t;
    t.header.push_back("freq_hz");
    for (const auto& s : selection) {
        if (s.to >= n.ports() || s.from >= n.ports()) {
            throw InvalidArgument(fmt::format("{} is outside a {}-port", sparam_name(s.to, s.from), n.ports()));
        }
        const auto name = sparam_name(s.to, s.from);
        if (columns.db) {
            t.header.push_back(name + "_db");
        }
        if (columns.phase_deg) {
            t.header.push_back(name + "_deg");
        }
        if (columns.magnitude) {
            t.header.push_back(name + "_mag");
        }
        if (columns.real_imag) {
            t.header.push_back(name + "_re");
            t.header.push_back(name + "_im");
        }
    }
    for (std::size_t k = 0; k < n.size(); ++k) {
        std::vector<double> row{n.grid()[k]};
        for (const auto& s : selection) {
            const Complex z = n.s(k, s.to, s.from);
            if (columns.db) {
                row.push_back(to_db(z));
            }
            if (columns.phase_deg) {
                row.push_back(std::arg(z) / deg);
            }
            if (columns.magnitude) {
                row.push_back(std::abs(z));
            }
            if (columns.real_imag) {
                row.push_back(z.real());
                row.push_back(z.imag());
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string write_response_csv(const NetworkData& n, const std::vector<SParamSelection>& selection,
                               const CsvColumns& columns) {
    return write_csv(response_table(n, selection, columns));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(fmt::format("cannot open '{}'", path.string()));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(fmt::format("cannot write '{}'", path.string()));
    }
    out << text;
    if (!out) {
        throw Error(fmt::format("write to '{}' failed", path.string()));
    }
}

}  // namespace rlf
