#include "singode/model.hpp"

#include "singode/error.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace singode {

OdeProblem::OdeProblem(int order, std::vector<CoefficientSpec> coefficients, double interval_radius,
                       std::string label)
    : order_(order),
      coefficients_(std::move(coefficients)),
      interval_radius_(interval_radius),
      label_(std::move(label)) {
    if (order_ < 2) throw FormatError(0, "order must be at least 2, got " + std::to_string(order_));
    if (coefficients_.size() != static_cast<std::size_t>(order_))
        throw FormatError(0, "order " + std::to_string(order_) + " needs " + std::to_string(order_) +
                                 " coefficients, got " + std::to_string(coefficients_.size()));
    if (!(interval_radius_ > 0)) throw FormatError(0, "interval radius must be positive");
    for (int k = 0; k < order_; ++k) {
        const auto& pole = coefficients_[k].declared_pole_order;
        if (pole && (*pole < 0 || *pole > order_ - k))
            throw FormatError(0, "pole_order_a" + std::to_string(k) + " must lie in [0, " +
                                     std::to_string(order_ - k) + "]");
    }
}

void OdeProblem::check_index(int k) const {
    if (k < 0 || k >= order_) throw RangeError("coefficient index " + std::to_string(k) + " out of range");
}

double OdeProblem::coefficient_at(int k, double x) const {
    check_index(k);
    if (x == 0) throw RangeError("coefficient_at: x must be nonzero");
    return expr::evaluate(coefficients_[k].formula, x);
}

long double OdeProblem::coefficient_at(int k, long double x) const {
    check_index(k);
    if (x == 0) throw RangeError("coefficient_at: x must be nonzero");
    return expr::evaluate(coefficients_[k].formula, x);
}

double OdeProblem::coefficient_at(int k, double x, Precision precision) const {
    check_index(k);
    if (x == 0) throw RangeError("coefficient_at: x must be nonzero");
    return expr::evaluate(coefficients_[k].formula, x, precision);
}

int OdeProblem::weight_exponent(int k) const {
    check_index(k);
    return coefficients_[k].declared_pole_order.value_or(order_ - k);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

int parse_int(std::string_view text, std::size_t line, std::string_view key) {
    int value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end)
        throw FormatError(line, std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
    return value;
}

double parse_real(std::string_view text, std::size_t line, std::string_view key) {
    try {
        return to_double(parse_decimal(text));
    } catch (const RangeError&) {
        throw FormatError(line, std::string(key) + ": expected a real number, got '" + std::string(text) + "'");
    }
}

std::string_view unquote(std::string_view value, std::size_t line, std::string_view key) {
    if (value.size() < 2 || value.front() != '"' || value.back() != '"')
        throw FormatError(line, std::string(key) + ": expression must be double-quoted");
    return value.substr(1, value.size() - 2);
}

// Returns k for "a<k>" / "pole_order_a<k>", or -1.
int coefficient_index(std::string_view key, std::string_view prefix) {
    if (key.substr(0, prefix.size()) != prefix) return -1;
    const auto digits = key.substr(prefix.size());
    if (digits.empty() || digits.size() > 4) return -1;
    int k = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) return -1;
    return k;
}

}  // namespace

OdeProblem load_problem(std::string_view text) {
    std::optional<int> order;
    std::size_t order_line = 0;
    double radius = 1.0;
    std::string label;
    std::map<int, std::pair<expr::Expr, std::size_t>> formulas;
    std::map<int, std::pair<int, std::size_t>> poles;
    std::map<std::string, std::size_t, std::less<>> seen;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto next = text.find('\n', pos);
        const auto raw = text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
        pos = next == std::string_view::npos ? text.size() + 1 : next + 1;
        ++line_no;

        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw FormatError(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw FormatError(line_no, "missing key");
        if (auto it = seen.find(key); it != seen.end())
            throw FormatError(line_no, "duplicate key '" + std::string(key) + "' (first on line " +
                                           std::to_string(it->second) + ")");
        seen.emplace(std::string(key), line_no);

        if (key == "order") {
            order = parse_int(value, line_no, key);
            order_line = line_no;
        } else if (key == "interval") {
            radius = parse_real(value, line_no, key);
            if (!(radius > 0)) throw FormatError(line_no, "interval must be positive");
        } else if (key == "label") {
            label = std::string(value.size() >= 2 && value.front() == '"' && value.back() == '"'
                                    ? value.substr(1, value.size() - 2)
                                    : value);
        } else if (int k = coefficient_index(key, "pole_order_a"); k >= 0) {
            const int p = parse_int(value, line_no, key);
            if (p < 0) throw FormatError(line_no, std::string(key) + ": pole order must be nonnegative");
            poles[k] = {p, line_no};
        } else if (int j = coefficient_index(key, "a"); j >= 0) {
            const auto source = unquote(value, line_no, key);
            try {
                formulas.insert_or_assign(j, std::pair{expr::parse(source), line_no});
            } catch (const Error& e) {
                throw FormatError(line_no, std::string(key) + ": " + e.what());
            }
        } else {
            throw FormatError(line_no, "unknown key '" + std::string(key) + "'");
        }
    }

    if (!order) throw FormatError(0, "missing 'order'");
    if (*order < 2) throw FormatError(order_line, "order must be at least 2");
    for (const auto& [k, entry] : formulas)
        if (k >= *order)
            throw FormatError(entry.second, "coefficient a" + std::to_string(k) + " exceeds order " +
                                                std::to_string(*order));
    for (const auto& [k, entry] : poles)
        if (k >= *order)
            throw FormatError(entry.second, "pole_order_a" + std::to_string(k) + " exceeds order " +
                                                std::to_string(*order));
    if (formulas.size() != static_cast<std::size_t>(*order))
        throw FormatError(0, "order " + std::to_string(*order) + " needs coefficients a0..a" +
                                 std::to_string(*order - 1) + ", got " + std::to_string(formulas.size()));

    std::vector<CoefficientSpec> coefficients;
    coefficients.reserve(formulas.size());
    for (int k = 0; k < *order; ++k) {
        CoefficientSpec spec{formulas.at(k).first, std::nullopt};
        if (auto it = poles.find(k); it != poles.end()) {
            if (it->second.first > *order - k)
                throw FormatError(it->second.second, "pole_order_a" + std::to_string(k) + " exceeds n - k = " +
                                                         std::to_string(*order - k));
            spec.declared_pole_order = it->second.first;
        }
        coefficients.push_back(std::move(spec));
    }
    return OdeProblem(*order, std::move(coefficients), radius, std::move(label));
}

OdeProblem load_problem_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(0, "cannot open problem file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_problem(buffer.str());
}

template <class T>
void FirstOrderSystem::apply(T x, std::span<const T> y, std::span<T> dydx) const {
    const int n = problem_->order();
    if (y.size() != dimension() || dydx.size() != dimension())
        throw RangeError("FirstOrderSystem: state dimension mismatch");
    T highest = 0;
    for (int k = 0; k < n; ++k) highest -= problem_->coefficient_at(k, x) * y[k];
    for (int i = 0; i + 1 < n; ++i) dydx[i] = y[i + 1];
    dydx[n - 1] = highest;
}

void FirstOrderSystem::operator()(double x, std::span<const double> y, std::span<double> dydx) const {
    apply<double>(x, y, dydx);
}

void FirstOrderSystem::operator()(long double x, std::span<const long double> y,
                                  std::span<long double> dydx) const {
    apply<long double>(x, y, dydx);
}

FirstOrderSystem to_first_order_system(const OdeProblem& problem) { return FirstOrderSystem(problem); }

}  // namespace singode
