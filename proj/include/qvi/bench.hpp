#pragma once

// Benchmark orchestration: execute every (problem x start x solver) cell,
// optionally across worker threads, and serialize the per-run records. Cell
// results land in preassigned slots, so output ordering is canonical
// (problem, then start, then solver) no matter how many jobs run.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "metrics.hpp"
#include "problem.hpp"
#include "solvers.hpp"

namespace qvi {

// Documented cap on worker threads; requests beyond it are clamped.
inline constexpr int kMaxJobs = 64;

struct BenchCell {
    const QviProblem* problem = nullptr;
    int start_id = 0;
    Algorithm algorithm = Algorithm::Proposed;
};

inline std::vector<BenchCell> enumerate_cells(const std::vector<QviProblem>& problems,
                                              const std::vector<Algorithm>& algorithms) {
    std::vector<BenchCell> cells;
    cells.reserve(problems.size() * 3 * algorithms.size());
    for (const auto& p : problems)
        for (int s = 0; s < static_cast<int>(p.starts.size()); ++s)
            for (Algorithm a : algorithms) cells.push_back({&p, s, a});
    return cells;
}

// Runs every (problem x start x solver) cell; `config_for(problem)` supplies
// the base configuration per problem (the cell's algorithm is set on top).
// Records land in canonical enumeration order regardless of the worker count.
template <class ConfigFor>
inline std::vector<RunRecord> run_cells_with(const std::vector<QviProblem>& problems,
                                             const std::vector<Algorithm>& algorithms,
                                             ConfigFor&& config_for, int jobs = 1) {
    if (problems.empty()) throw std::invalid_argument("run_cells: no problems");
    if (algorithms.empty()) throw std::invalid_argument("run_cells: no solvers");
    const auto cells = enumerate_cells(problems, algorithms);
    std::vector<RunRecord> records(cells.size());

    const int workers = std::min({jobs < 1 ? 1 : jobs, kMaxJobs, static_cast<int>(cells.size())});
    auto run_one = [&](std::size_t idx) {
        const BenchCell& cell = cells[idx];
        SolverConfig cfg = config_for(*cell.problem);
        cfg.algorithm = cell.algorithm;
        const auto trace =
            solve(*cell.problem, cfg, cell.problem->starts[static_cast<std::size_t>(cell.start_id)]);
        records[idx] = make_run_record(trace, cell.start_id);
    };

    if (workers <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1))
                    run_one(i);
            });
        for (auto& t : pool) t.join();
    }
    return records;
}

inline std::vector<RunRecord> run_cells(const std::vector<QviProblem>& problems,
                                        const std::vector<Algorithm>& algorithms,
                                        const SolverConfig& base, int jobs = 1) {
    return run_cells_with(problems, algorithms, [&](const QviProblem&) { return base; }, jobs);
}

// Shortest exact decimal form of a double ("%.17g" trimmed by round-trip).
inline std::string format_double(double v) {
    char buf[32];
    for (int precision : {15, 16, 17}) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

inline constexpr const char* kCsvHeader = "problem,start_id,solver,iters,time_ms,opt,feas,status,eoc";

inline void write_csv(const std::vector<RunRecord>& records, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.problem << ',' << r.start_id << ',' << r.solver << ',' << r.iters << ','
            << format_double(r.time_ms) << ',' << format_double(r.final_opt) << ','
            << format_double(r.final_feas) << ',' << status_name(r.status) << ','
            << format_double(r.eoc) << '\n';
    }
}

inline nlohmann::json record_to_json(const RunRecord& r) {
    return nlohmann::json{{"problem", r.problem}, {"start_id", r.start_id}, {"solver", r.solver},
                          {"iters", r.iters},     {"time_ms", r.time_ms},   {"opt", r.final_opt},
                          {"feas", r.final_feas}, {"status", status_name(r.status)},
                          {"eoc", r.eoc}};
}

inline nlohmann::json records_to_json(const std::vector<RunRecord>& records) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : records) rows.push_back(record_to_json(r));
    return nlohmann::json{{"runs", std::move(rows)}};
}

// Parses one CSV line of the schema above back into a RunRecord; used by the
// profile command so its input can be the run command's output.
inline RunRecord parse_csv_row(const std::string& line, int line_no) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    if (fields.size() != 9)
        throw std::invalid_argument("results row " + std::to_string(line_no) + ": expected 9 fields, got " +
                                    std::to_string(fields.size()));
    RunRecord r;
    try {
        r.problem = fields[0];
        r.start_id = std::stoi(fields[1]);
        r.solver = fields[2];
        r.iters = std::stoi(fields[3]);
        r.time_ms = std::stod(fields[4]);
        r.final_opt = std::stod(fields[5]);
        r.final_feas = std::stod(fields[6]);
        r.status = parse_status(fields[7]);
        r.eoc = std::stod(fields[8]);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("results row " + std::to_string(line_no) + ": malformed field");
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("results row " + std::to_string(line_no) + ": value out of range");
    }
    return r;
}

inline std::vector<RunRecord> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("results file is empty");
    if (line != kCsvHeader)
        throw std::invalid_argument("results file header mismatch; expected \"" +
                                    std::string(kCsvHeader) + "\"");
    std::vector<RunRecord> records;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        records.push_back(parse_csv_row(line, line_no));
    }
    return records;
}

}  // namespace qvi
