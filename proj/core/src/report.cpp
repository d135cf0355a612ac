#include "extlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "extlab/errors.hpp"

namespace extlab {

bool ExperimentReport::pass() const {
    for (const auto& c : criteria)
        if (!c.pass) return false;
    return true;
}

void ExperimentReport::add_row(std::initializer_list<double> values) {
    if (!columns.empty() && values.size() != columns.size())
        throw Error("ExperimentReport::add_row: column count mismatch");
    rows.emplace_back(values);
}

void ExperimentReport::check_le(const std::string& name, double value,
                                double threshold, const std::string& note) {
    criteria.push_back({name, value, threshold, "<=", value <= threshold, note});
}

void ExperimentReport::check_ge(const std::string& name, double value,
                                double threshold, const std::string& note) {
    criteria.push_back({name, value, threshold, ">=", value >= threshold, note});
}

void ExperimentReport::check_within(const std::string& name, double value,
                                    double center, double halfwidth,
                                    const std::string& note) {
    Criterion c;
    c.name = name;
    c.value = value;
    c.threshold = halfwidth;
    c.relation = "within " + std::to_string(center) + " +/-";
    c.pass = std::abs(value - center) <= halfwidth;
    c.note = note;
    criteria.push_back(c);
}

std::string ExperimentReport::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out += columns[i];
        out += (i + 1 < columns.size()) ? ',' : '\n';
    }
    char buf[40];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out += buf;
            out += (i + 1 < row.size()) ? ',' : '\n';
        }
    }
    return out;
}

std::string ExperimentReport::to_json() const {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["csv_schema"] = {{"version", kCsvSchemaVersion}, {"columns", columns}};
    j["params"] = params;
    j["fits"] = fits;
    j["wall_seconds"] = wall_seconds;
    nlohmann::json cr = nlohmann::json::array();
    for (const auto& c : criteria) {
        cr.push_back({{"name", c.name},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"relation", c.relation},
                      {"pass", c.pass},
                      {"note", c.note}});
    }
    j["criteria"] = cr;
    j["pass"] = pass();
    j["rows"] = rows;
    return j.dump(2);
}

ExperimentReport ExperimentReport::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ExperimentReport r;
    r.experiment = j.at("experiment").get<std::string>();
    r.columns = j.at("csv_schema").at("columns").get<std::vector<std::string>>();
    r.params = j.at("params").get<std::map<std::string, std::string>>();
    r.fits = j.at("fits").get<std::map<std::string, double>>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    for (const auto& c : j.at("criteria")) {
        Criterion cr;
        cr.name = c.at("name").get<std::string>();
        cr.value = c.at("value").get<double>();
        cr.threshold = c.at("threshold").get<double>();
        cr.relation = c.at("relation").get<std::string>();
        cr.pass = c.at("pass").get<bool>();
        cr.note = c.at("note").get<std::string>();
        r.criteria.push_back(cr);
    }
    r.rows = j.at("rows").get<std::vector<std::vector<double>>>();
    return r;
}

void write_report(const ExperimentReport& rep, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    {
        std::ofstream f(out_dir + "/rows.csv");
        f << rep.to_csv();
    }
    {
        std::ofstream f(out_dir + "/summary.json");
        f << rep.to_json() << "\n";
    }
    {
        std::ofstream f(out_dir + "/config.resolved");
        for (const auto& [k, v] : rep.params) f << k << " = " << v << "\n";
    }
}

} // namespace extlab
