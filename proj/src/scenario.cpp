#include "cdeal/scenario.hpp"

#include "cdeal/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace cdeal {

namespace {

constexpr double kProbTolerance = 1e-12;

void validate_probs(const Vector& probs) {
    if (probs.size() == 0) throw DomainError("scenario space must not be empty");
    for (Index i = 0; i < probs.size(); ++i) {
        if (!std::isfinite(probs[i]) || probs[i] <= 0.0)
            throw DomainError("scenario " + std::to_string(i) + ": probability must be positive");
    }
    const double total = probs.sum();
    if (std::abs(total - 1.0) > kProbTolerance)
        throw DomainError("probabilities sum to " + format_number(total) + ", expected 1");
}

}  // namespace

ScenarioSpace::ScenarioSpace(std::vector<std::string> labels, Vector probs)
    : labels_(std::move(labels)), probs_(std::move(probs)) {
    if (static_cast<Index>(labels_.size()) != probs_.size())
        throw ShapeError("label count differs from probability count");
    validate_probs(probs_);
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_) {
        if (!seen.insert(l).second) throw DomainError("duplicate scenario label '" + l + "'");
    }
    probs_ /= probs_.sum();
}

std::shared_ptr<const ScenarioSpace> ScenarioSpace::uniform(Index n) {
    if (n <= 0) throw DomainError("scenario space must not be empty");
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i));
    return make(std::move(labels), Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

std::shared_ptr<const ScenarioSpace> ScenarioSpace::make(std::vector<std::string> labels,
                                                         Vector probs) {
    return std::make_shared<const ScenarioSpace>(std::move(labels), std::move(probs));
}

bool ScenarioSpace::operator==(const ScenarioSpace& other) const {
    return labels_ == other.labels_ && probs_ == other.probs_;
}

RandomVariable::RandomVariable(SpacePtr space, Vector values)
    : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw ShapeError("random variable without a scenario space");
    if (values_.size() != space_->size())
        throw ShapeError("random variable has " + std::to_string(values_.size()) +
                         " values on a space of " + std::to_string(space_->size()) +
                         " scenarios");
    if (!values_.allFinite()) throw DomainError("random variable values must be finite");
}

RandomVariable RandomVariable::constant(SpacePtr space, double value) {
    const Index n = space->size();
    return RandomVariable(std::move(space), Vector::Constant(n, value));
}

double RandomVariable::mean() const { return space_->probs().dot(values_); }

bool same_space(const RandomVariable& a, const RandomVariable& b) {
    return a.space() == b.space() || *a.space() == *b.space();
}

void require_same_space(const RandomVariable& a, const RandomVariable& b) {
    if (!same_space(a, b)) throw ShapeError("random variables live on different scenario spaces");
}

RandomVariable operator+(const RandomVariable& a, const RandomVariable& b) {
    require_same_space(a, b);
    return RandomVariable(a.space(), a.values() + b.values());
}

RandomVariable operator-(const RandomVariable& a, const RandomVariable& b) {
    require_same_space(a, b);
    return RandomVariable(a.space(), a.values() - b.values());
}

RandomVariable operator-(const RandomVariable& a) { return RandomVariable(a.space(), -a.values()); }

RandomVariable operator+(const RandomVariable& a, double m) {
    return RandomVariable(a.space(), a.values().array() + m);
}

RandomVariable operator-(const RandomVariable& a, double m) { return a + (-m); }

RandomVariable operator*(double c, const RandomVariable& a) {
    return RandomVariable(a.space(), c * a.values());
}

Measure::Measure(SpacePtr space, Vector masses, bool unique)
    : space_(std::move(space)), masses_(std::move(masses)), unique_(unique) {
    if (!space_) throw ShapeError("measure without a scenario space");
    if (masses_.size() != space_->size()) throw ShapeError("measure length differs from space");
    for (Index i = 0; i < masses_.size(); ++i) {
        if (!std::isfinite(masses_[i]) || masses_[i] < 0.0)
            throw DomainError("measure masses must be nonnegative");
    }
    // Masses read back from 12-digit output are accepted and renormalized.
    if (std::abs(masses_.sum() - 1.0) > 1e-9)
        throw DomainError("measure masses sum to " + format_number(masses_.sum()));
    masses_ /= masses_.sum();
}

double Measure::expectation(const RandomVariable& x) const {
    if (x.space() != space_ && !(*x.space() == *space_))
        throw ShapeError("measure and random variable live on different spaces");
    return masses_.dot(x.values());
}

std::vector<Index> ascending_order(const Vector& values) {
    std::vector<Index> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return values[a] < values[b]; });
    return order;
}

double quantile(const RandomVariable& x, double s) {
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("quantile level must lie in (0, 1]");
    const auto order = ascending_order(x.values());
    const Vector& p = x.space()->probs();
    double cumulative = 0.0;
    for (Index idx : order) {
        cumulative += p[idx];
        // Guard against the last cumulative sum landing a few ulps below 1.
        if (cumulative >= s - 1e-15) return x[idx];
    }
    return x[order.back()];
}

RandomVariable conditional_expectation(const RandomVariable& x, const RandomVariable& y) {
    require_same_space(x, y);
    const Vector& p = x.space()->probs();
    const auto order = ascending_order(y.values());
    Vector out(x.size());
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t end = start;
        double mass = 0.0;
        double weighted = 0.0;
        while (end < order.size() && y[order[end]] == y[order[start]]) {
            mass += p[order[end]];
            weighted += p[order[end]] * x[order[end]];
            ++end;
        }
        const double value = weighted / mass;
        for (std::size_t k = start; k < end; ++k) out[order[k]] = value;
        start = end;
    }
    return RandomVariable(x.space(), std::move(out));
}

bool ScenarioSet::contains(std::string_view name) const {
    return std::any_of(columns.begin(), columns.end(),
                       [&](const auto& c) { return c.first == name; });
}

const RandomVariable& ScenarioSet::column(std::string_view name) const {
    for (const auto& [n, v] : columns) {
        if (n == name) return v;
    }
    throw ParseError("no column named '" + std::string(name) + "'");
}

namespace {

SpacePtr make_space_checked(std::vector<std::string> labels, Vector probs,
                            const std::string& where) {
    try {
        return ScenarioSpace::make(std::move(labels), std::move(probs));
    } catch (const Error& e) {
        throw ParseError(where + ": " + e.what());
    }
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        auto field = line.substr(start, pos == std::string_view::npos ? std::string_view::npos
                                                                       : pos - start);
        while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
            field.remove_prefix(1);
        while (!field.empty() &&
               (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
            field.remove_suffix(1);
        out.push_back(field);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

ScenarioSet parse_scenarios_json(std::string_view text) {
    const Json doc = parse_json_strict(text, "scenario file");
    if (!doc.is_object()) throw ParseError("scenario file: top level must be an object");
    if (!doc.contains("probs") || !doc["probs"].is_array())
        throw ParseError("scenario file: missing array \"probs\"");
    const auto& jprobs = doc["probs"];
    const Index n = static_cast<Index>(jprobs.size());
    if (n == 0) throw ParseError("scenario file: \"probs\" is empty");

    Vector probs(n);
    for (Index i = 0; i < n; ++i) {
        const auto& v = jprobs[static_cast<std::size_t>(i)];
        if (!v.is_number())
            throw ParseError("scenario file: probs[" + std::to_string(i) + "] is not a number");
        probs[i] = v.get<double>();
        if (!(probs[i] > 0.0))
            throw ParseError("scenario file: probs[" + std::to_string(i) +
                             "] must be positive");
    }

    std::vector<std::string> labels;
    if (doc.contains("labels")) {
        const auto& jl = doc["labels"];
        if (!jl.is_array() || static_cast<Index>(jl.size()) != n)
            throw ParseError("scenario file: \"labels\" must be an array of length " +
                             std::to_string(n));
        for (std::size_t i = 0; i < jl.size(); ++i) {
            if (jl[i].is_string())
                labels.push_back(jl[i].get<std::string>());
            else if (jl[i].is_number())
                labels.push_back(jl[i].dump());
            else
                throw ParseError("scenario file: labels[" + std::to_string(i) +
                                 "] must be a string");
        }
    } else {
        for (Index i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i));
    }

    ScenarioSet set;
    set.space = make_space_checked(std::move(labels), probs, "scenario file");

    if (!doc.contains("columns")) throw ParseError("scenario file: missing object \"columns\"");
    {
        const auto& cols = doc["columns"];
        if (!cols.is_object()) throw ParseError("scenario file: \"columns\" must be an object");
        for (const auto& [name, arr] : cols.items()) {
            if (!arr.is_array() || static_cast<Index>(arr.size()) != n)
                throw ParseError("scenario file: column \"" + name + "\" must have " +
                                 std::to_string(n) + " values");
            Vector values(n);
            for (Index i = 0; i < n; ++i) {
                const auto& v = arr[static_cast<std::size_t>(i)];
                if (!v.is_number())
                    throw ParseError("scenario file: columns." + name + "[" + std::to_string(i) +
                                     "] is not a number");
                values[i] = v.get<double>();
            }
            set.columns.emplace_back(name, RandomVariable(set.space, std::move(values)));
        }
    }
    return set;
}

ScenarioSet parse_scenarios_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto pos = text.find('\n', start);
        auto line = text.substr(start, pos == std::string_view::npos ? std::string_view::npos
                                                                      : pos - start);
        lines.push_back(line);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    while (!lines.empty() && split_csv_line(lines.back()) == std::vector<std::string_view>{""})
        lines.pop_back();
    if (lines.empty()) throw ParseError("scenario CSV: empty file");

    const auto header = split_csv_line(lines.front());
    if (header.size() < 2 || header[0] != "label" || header[1] != "prob")
        throw ParseError("scenario CSV: header must start with 'label,prob'");
    std::vector<std::string> names;
    for (std::size_t c = 2; c < header.size(); ++c) {
        std::string name(header[c]);
        if (name.empty()) throw ParseError("scenario CSV: empty column name at column " +
                                           std::to_string(c + 1));
        if (std::find(names.begin(), names.end(), name) != names.end())
            throw ParseError("scenario CSV: duplicate column name '" + name + "'");
        names.push_back(std::move(name));
    }

    const Index n = static_cast<Index>(lines.size()) - 1;
    if (n == 0) throw ParseError("scenario CSV: no scenario rows");
    std::vector<std::string> labels;
    Vector probs(n);
    Matrix values(n, static_cast<Index>(names.size()));
    for (Index r = 0; r < n; ++r) {
        const auto fields = split_csv_line(lines[static_cast<std::size_t>(r + 1)]);
        const std::string row = "scenario CSV line " + std::to_string(r + 2);
        if (fields.size() != header.size())
            throw ParseError(row + ": expected " + std::to_string(header.size()) +
                             " fields, found " + std::to_string(fields.size()));
        labels.emplace_back(fields[0]);
        probs[r] = parse_number(fields[1], row + ", column 'prob'");
        if (!(probs[r] > 0.0)) throw ParseError(row + ", column 'prob': must be positive");
        for (std::size_t c = 0; c < names.size(); ++c)
            values(r, static_cast<Index>(c)) =
                parse_number(fields[c + 2], row + ", column '" + names[c] + "'");
    }

    ScenarioSet set;
    set.space = make_space_checked(std::move(labels), probs, "scenario CSV");
    for (std::size_t c = 0; c < names.size(); ++c)
        set.columns.emplace_back(names[c],
                                 RandomVariable(set.space, values.col(static_cast<Index>(c))));
    return set;
}

ScenarioSet load_scenarios(const std::filesystem::path& path, ScenarioFormat format) {
    const std::string text = read_text_file(path.string());
    if (format == ScenarioFormat::automatic) {
        auto ext = path.extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        format = ext == ".csv" ? ScenarioFormat::csv : ScenarioFormat::json;
    }
    try {
        return format == ScenarioFormat::csv ? parse_scenarios_csv(text)
                                             : parse_scenarios_json(text);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string scenarios_to_json(const ScenarioSet& set) {
    Json doc;
    doc["labels"] = set.space->labels();
    Json probs = Json::array();
    for (Index i = 0; i < set.space->size(); ++i) probs.push_back(set.space->prob(i));
    doc["probs"] = std::move(probs);
    Json cols = Json::object();
    for (const auto& [name, var] : set.columns) cols[name] = json_array(var.values());
    doc["columns"] = std::move(cols);
    return doc.dump();
}

std::string scenarios_to_csv(const ScenarioSet& set) {
    std::ostringstream out;
    out << "label,prob";
    for (const auto& c : set.columns) out << ',' << c.first;
    out << '\n';
    for (Index i = 0; i < set.space->size(); ++i) {
        out << set.space->labels()[static_cast<std::size_t>(i)] << ','
            << format_exact(set.space->prob(i));
        for (const auto& c : set.columns) out << ',' << format_number(c.second[i]);
        out << '\n';
    }
    return out.str();
}

}  // namespace cdeal
