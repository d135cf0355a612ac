#ifndef EXTLAB_REPORT_HPP
#define EXTLAB_REPORT_HPP

#include <map>
#include <string>
#include <vector>

namespace extlab {

inline constexpr int kCsvSchemaVersion = 1;

// Structured numeric result of one experiment run.  Every row carries the
// bound it was compared against and the ratio to it, never a bare pass/fail.
struct ExperimentReport {
    struct Criterion {
        std::string name;
        double value = 0.0;
        double threshold = 0.0;
        std::string relation;  // "<=", ">=", "within"
        bool pass = false;
        std::string note;  // e.g. "artifact convention"
    };

    std::string experiment;
    std::map<std::string, std::string> params;  // resolved snapshot
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, double> fits;  // fitted slopes / measured constants
    std::vector<Criterion> criteria;
    double wall_seconds = 0.0;

    bool pass() const;
    void add_row(std::initializer_list<double> values);
    void check_le(const std::string& name, double value, double threshold,
                  const std::string& note = "");
    void check_ge(const std::string& name, double value, double threshold,
                  const std::string& note = "");
    void check_within(const std::string& name, double value, double center,
                      double halfwidth, const std::string& note = "");

    std::string to_csv() const;
    std::string to_json() const;
    static ExperimentReport from_json(const std::string& text);
};

// out_dir/{rows.csv, summary.json, config.resolved}; creates directories.
void write_report(const ExperimentReport& rep, const std::string& out_dir);

} // namespace extlab

#endif
