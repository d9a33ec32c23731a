#include "subsel/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace subsel::report {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view token, std::size_t line) {
    token = trim(token);
    double v = 0.0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    if (!token.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (token.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v))
        throw InputError("line " + std::to_string(line) + ": not a finite decimal number: '" +
                         std::string(token) + "'");
    return v;
}

MatrixData parse_csv(std::string_view text) {
    MatrixData out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        std::size_t count = 0;
        while (true) {
            const auto comma = line.find(',');
            out.data.push_back(parse_number(line.substr(0, comma), line_no));
            ++count;
            if (comma == std::string_view::npos) break;
            line = line.substr(comma + 1);
        }
        if (out.rows == 0) {
            out.cols = count;
        } else if (count != out.cols) {
            throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(out.cols) +
                             " values, got " + std::to_string(count));
        }
        ++out.rows;
    }
    if (out.rows == 0) throw InputError("matrix input is empty");
    return out;
}

MatrixData parse_json_matrix(const json& j) {
    if (!j.is_object()) throw InputError("matrix JSON must be an object");
    MatrixData out;
    try {
        out.rows = j.at("rows").get<std::size_t>();
        out.cols = j.at("cols").get<std::size_t>();
        out.data = j.at("data").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw InputError(std::string("matrix JSON: ") + e.what());
    }
    if (out.rows == 0 || out.cols == 0) throw InputError("matrix JSON: empty shape");
    if (out.data.size() != out.rows * out.cols)
        throw InputError("matrix JSON: data length does not match rows * cols");
    return out;
}

json matrix_json(const MatrixData& m) {
    return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

json optional_number(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
T field(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InputError(std::string("report field '") + key + "': " + e.what());
    }
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

MatrixData parse_matrix(std::string_view text) {
    const auto body = trim(text);
    const auto first = body.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && body[first] == '{') {
        json j;
        try {
            j = json::parse(body);
        } catch (const json::parse_error& e) {
            throw InputError(std::string("matrix JSON: ") + e.what());
        }
        return parse_json_matrix(j);
    }
    return parse_csv(text);
}

MatrixData read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_matrix(ss.str());
}

std::string to_csv(const MatrixData& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (j) out += ',';
            out += format_double(m.data[i * m.cols + j]);
        }
        out += '\n';
    }
    return out;
}

MatrixData from_target(const linalg::TargetMatrix& a) {
    MatrixData m{a.rows(), a.cols(), {}};
    const auto& e = a.entries();
    m.data.assign(e.data(), e.data() + e.size());
    return m;
}

linalg::TargetMatrix to_target(const MatrixData& m) {
    return linalg::TargetMatrix::from_row_major(m.rows, m.cols, m.data);
}

SelectReport make_select_report(const linalg::TargetMatrix& a, const selector::SelectionResult& r,
                                std::string method, double wall_time_ms, bool embed_matrix) {
    SelectReport out;
    out.method = std::move(method);
    out.m = a.cols();
    out.n = a.rows();
    out.k = r.k;
    out.rank = r.rank;
    out.subset.assign(r.subset.indices().begin(), r.subset.indices().end());
    out.sigma_min = r.sigma_min;
    out.sigma_min_sq = r.sigma_min_sq;
    out.sigma_min_target = r.sigma_min_target;
    out.root_certificate = r.root_certificate;
    out.bound_factor = r.bound_factor;
    out.bound_certificate = r.bound_certificate;
    out.alpha = r.alpha.value;
    out.alpha_branch = std::string(bounds::to_string(r.alpha.branch));
    out.epsilon = r.epsilon;
    out.wall_time_ms = wall_time_ms;
    out.trace = r.trace;
    if (embed_matrix) out.matrix = from_target(a);
    return out;
}

selector::SelectionResult to_result(const SelectReport& report, std::size_t m) {
    selector::SelectionResult r;
    r.subset = linalg::SubsetIndex::from(report.subset, m);
    r.k = report.k;
    r.rank = report.rank;
    r.sigma_min = report.sigma_min;
    r.sigma_min_sq = report.sigma_min_sq;
    r.sigma_min_target = report.sigma_min_target;
    r.root_certificate = report.root_certificate;
    r.bound_factor = report.bound_factor;
    r.bound_certificate = report.bound_certificate;
    r.alpha.value = report.alpha;
    r.alpha.branch = bounds::alpha_branch_from_string(report.alpha_branch).value_or(bounds::AlphaBranch::WholeSet);
    r.epsilon = report.epsilon;
    r.trace = report.trace;
    return r;
}

json to_json(const SelectReport& r) {
    json trace = json::array();
    for (const auto& s : r.trace) trace.push_back({{"column", s.column}, {"root", s.root}});
    json j{{"method", r.method},
           {"m", r.m},
           {"n", r.n},
           {"k", r.k},
           {"rank", r.rank},
           {"subset", r.subset},
           {"sigma_min", r.sigma_min},
           {"sigma_min_sq", r.sigma_min_sq},
           {"sigma_min_target", r.sigma_min_target},
           {"root_certificate", r.root_certificate},
           {"bound_factor", r.bound_factor},
           {"bound_certificate", r.bound_certificate},
           {"alpha", r.alpha},
           {"alpha_branch", r.alpha_branch},
           {"epsilon", r.epsilon},
           {"wall_time_ms", r.wall_time_ms},
           {"trace", trace}};
    if (r.matrix) j["matrix"] = matrix_json(*r.matrix);
    return j;
}

SelectReport select_report_from_json(const json& j) {
    if (!j.is_object()) throw InputError("report must be a JSON object");
    SelectReport r;
    r.method = field<std::string>(j, "method");
    r.m = field<std::size_t>(j, "m");
    r.n = field<std::size_t>(j, "n");
    r.k = field<std::size_t>(j, "k");
    r.rank = field<std::size_t>(j, "rank");
    r.subset = field<std::vector<std::size_t>>(j, "subset");
    r.sigma_min = field<double>(j, "sigma_min");
    r.sigma_min_sq = field<double>(j, "sigma_min_sq");
    r.sigma_min_target = field<double>(j, "sigma_min_target");
    r.root_certificate = field<double>(j, "root_certificate");
    r.bound_factor = field<double>(j, "bound_factor");
    r.bound_certificate = field<double>(j, "bound_certificate");
    r.alpha = field<double>(j, "alpha");
    r.alpha_branch = field<std::string>(j, "alpha_branch");
    r.epsilon = field<double>(j, "epsilon");
    r.wall_time_ms = field<double>(j, "wall_time_ms");
    for (const auto& s : field<json>(j, "trace"))
        r.trace.push_back({field<std::size_t>(s, "column"), field<double>(s, "root")});
    if (j.contains("matrix")) r.matrix = parse_json_matrix(j.at("matrix"));
    return r;
}

json to_json(const bounds::BoundReport& r) {
    json dominates = json::object();
    for (const auto& [name, flag] : r.dominates) dominates["main_gt_" + name] = flag;
    return json{{"m", r.m},
                {"n", r.n},
                {"k", r.k},
                {"alpha", r.alpha},
                {"alpha_branch", std::string(bounds::to_string(r.alpha_branch))},
                {"main_bound", r.main_bound},
                {"explicit_bound", optional_number(r.explicit_bound)},
                {"baselines", r.baselines},
                {"dominance", dominates}};
}

bounds::BoundReport bound_report_from_json(const json& j) {
    bounds::BoundReport r;
    r.m = field<std::size_t>(j, "m");
    r.n = field<std::size_t>(j, "n");
    r.k = field<std::size_t>(j, "k");
    r.alpha = field<double>(j, "alpha");
    const auto branch = bounds::alpha_branch_from_string(field<std::string>(j, "alpha_branch"));
    if (!branch) throw InputError("unknown alpha_branch");
    r.alpha_branch = *branch;
    r.main_bound = field<double>(j, "main_bound");
    if (!j.at("explicit_bound").is_null()) r.explicit_bound = field<double>(j, "explicit_bound");
    r.baselines = field<std::map<std::string, double>>(j, "baselines");
    const auto dominance = field<json>(j, "dominance");
    for (const auto& [key, flag] : dominance.items())
        r.dominates[key.substr(std::string("main_gt_").size())] = flag.get<bool>();
    return r;
}

std::string bound_csv_header() {
    return "m,n,k,alpha,alpha_branch,main_bound,explicit_bound,hong_pan,hong_pan_n2,greedy,xu21,spielman17,"
           "main_gt_hong_pan,main_gt_hong_pan_n2,main_gt_greedy,main_gt_xu21,main_gt_spielman17";
}

std::string bound_csv_row(const bounds::BoundReport& r) {
    std::ostringstream os;
    os << r.m << ',' << r.n << ',' << r.k << ',' << format_double(r.alpha) << ','
       << bounds::to_string(r.alpha_branch) << ',' << format_double(r.main_bound) << ','
       << (r.explicit_bound ? format_double(*r.explicit_bound) : "");
    const char* names[] = {bounds::kHongPan, bounds::kHongPanN2, bounds::kGreedy, bounds::kXu21,
                           bounds::kSpielman17};
    for (const char* name : names) {
        const auto it = r.baselines.find(name);
        os << ',' << (it == r.baselines.end() ? "" : format_double(it->second));
    }
    for (const char* name : names) {
        const auto it = r.dominates.find(name);
        os << ',' << (it == r.dominates.end() ? "" : (it->second ? "true" : "false"));
    }
    return os.str();
}

} // namespace subsel::report
