#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sl2a/io/format.hpp"
#include "sl2a/io/pnm.hpp"
#include "sl2a/tasks/task.hpp"
#include "sl2a/training/fit.hpp"

namespace sl2a {

inline constexpr const char* kReportHeader = "epoch,loss,metric,seconds";

/// One line per logged epoch under the header "epoch,loss,metric,seconds".
/// Numbers use the shortest round-trip form.
inline std::string report_csv(const std::vector<EpochRecord>& records)
{
    std::string s = std::string(kReportHeader) + "\n";
    for (const auto& r : records)
        s += std::to_string(r.epoch) + "," + format_number(r.loss) + "," + format_number(r.metric) + "," +
             format_number(r.seconds) + "\n";
    return s;
}

inline std::vector<EpochRecord> parse_report_csv(const std::string& text)
{
    std::vector<EpochRecord> out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 0) {
            if (line != kReportHeader) throw ParseError("report: expected header '" + std::string(kReportHeader) + "'", pos);
        } else if (!line.empty()) {
            std::vector<std::string> f;
            std::stringstream ss(line);
            for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
            if (f.size() != 4) throw ParseError("report: expected 4 fields", pos);
            EpochRecord r;
            const double epoch = parse_number(f[0], pos);
            if (epoch < 0 || epoch != static_cast<double>(static_cast<std::size_t>(epoch)))
                throw ParseError("report: bad epoch", pos);
            r.epoch = static_cast<std::size_t>(epoch);
            r.loss = parse_number(f[1], pos);
            r.metric = parse_number(f[2], pos);
            r.seconds = parse_number(f[3], pos);
            out.push_back(r);
        }
        ++line_no;
        pos = end + 1;
    }
    if (line_no == 0) throw ParseError("report: empty file", 0);
    return out;
}

/// A training report as read back from a run directory.
struct StoredReport {
    std::string name;
    std::string metric;
    std::vector<EpochRecord> records;
};

/// Loads <dir>/report.csv and the metric name from <dir>/summary.json.
/// A path to a CSV file is also accepted when summary.json sits beside it.
inline StoredReport load_report(const std::filesystem::path& path)
{
    namespace fs = std::filesystem;
    const fs::path csv = fs::is_directory(path) ? path / "report.csv" : path;
    const fs::path dir = csv.parent_path();
    StoredReport r;
    r.name = fs::is_directory(path) ? path.filename().string() : dir.filename().string();
    if (r.name.empty() || r.name == ".") r.name = fs::absolute(dir).filename().string();
    const auto bytes = detail::read_file(csv);
    try {
        r.records = parse_report_csv(std::string(bytes.begin(), bytes.end()));
    } catch (const ParseError& e) {
        throw ParseError(csv.string() + ": " + e.what(), e.offset());
    }
    const fs::path summary = dir / "summary.json";
    const auto sbytes = detail::read_file(summary);
    try {
        const auto j = nlohmann::json::parse(sbytes.begin(), sbytes.end());
        r.metric = j.at("metric").get<std::string>();
        if (j.contains("name")) r.name = j.at("name").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(summary.string() + ": " + e.what());
    }
    return r;
}

struct Comparison {
    std::string comparison_csv;  ///< epoch, one metric column per report, deltas against the first
    std::string ranking_csv;     ///< rank, name, best metric, best epoch
};

/// Aligns reports on the epochs every report logged and ranks them by best
/// metric (higher first, except the spectral error). Ties keep input order.
inline Comparison compare(const std::vector<StoredReport>& reports)
{
    if (reports.size() < 2) throw ConfigError("compare: at least two reports are required");
    const std::string metric = reports.front().metric;
    for (const auto& r : reports)
        if (r.metric != metric)
            throw ConfigError("compare: metric mismatch ('" + metric + "' vs '" + r.metric + "' in " + r.name + ")");
    const MetricKind kind = parse_metric(metric);

    std::vector<std::map<std::size_t, double>> by_epoch;
    std::set<std::size_t> common;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        std::map<std::size_t, double> m;
        for (const auto& rec : reports[i].records) m[rec.epoch] = rec.metric;
        if (i == 0) {
            for (const auto& [e, v] : m) common.insert(e);
        } else {
            std::set<std::size_t> keep;
            for (std::size_t e : common)
                if (m.count(e)) keep.insert(e);
            common = std::move(keep);
        }
        by_epoch.push_back(std::move(m));
    }

    Comparison c;
    c.comparison_csv = "epoch";
    for (const auto& r : reports) c.comparison_csv += "," + metric + "_" + r.name;
    for (std::size_t i = 1; i < reports.size(); ++i) c.comparison_csv += ",delta_" + reports[i].name;
    c.comparison_csv += "\n";
    for (std::size_t e : common) {
        c.comparison_csv += std::to_string(e);
        for (const auto& m : by_epoch) c.comparison_csv += "," + format_number(m.at(e));
        for (std::size_t i = 1; i < by_epoch.size(); ++i)
            c.comparison_csv += "," + format_number(by_epoch[i].at(e) - by_epoch[0].at(e));
        c.comparison_csv += "\n";
    }

    struct Best {
        std::size_t index;
        double metric;
        std::size_t epoch;
    };
    std::vector<Best> best;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (reports[i].records.empty()) throw ConfigError("compare: report '" + reports[i].name + "' is empty");
        Best b{i, reports[i].records.front().metric, reports[i].records.front().epoch};
        for (const auto& rec : reports[i].records)
            if (detail::improves(kind, rec.metric, b.metric)) b = {i, rec.metric, rec.epoch};
        best.push_back(b);
    }
    std::stable_sort(best.begin(), best.end(), [&](const Best& a, const Best& b) {
        return detail::improves(kind, a.metric, b.metric);
    });
    c.ranking_csv = "rank,name,best_" + metric + ",best_epoch\n";
    for (std::size_t k = 0; k < best.size(); ++k)
        c.ranking_csv += std::to_string(k + 1) + "," + reports[best[k].index].name + "," + format_number(best[k].metric) +
                         "," + std::to_string(best[k].epoch) + "\n";
    return c;
}

}  // namespace sl2a
