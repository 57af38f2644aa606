#pragma once

#include <string>
#include <vector>

#include "coopgeo/sim.hpp"

namespace coopgeo {

struct MetricRow {
    double x = 0.0;
    std::string metric;
    double value = 0.0;
    double ci95 = 0.0;
};

struct MetricsRecord {
    std::vector<std::string> header;  // scenario echo, one line per entry
    std::vector<MetricRow> rows;
};

// 95% normal-approximation halfwidth for a proportion.
double proportion_ci95(double p, long long n);

// Aggregates a protocol run into per-packet error rate, residual
// transmission error probability, collision probability, and normalized
// saturated throughput. `x` tags the sweep coordinate; `suffix` is
// appended to metric names (e.g. "_baseline").
void append_protocol_metrics(const RunResult& r, double x,
                             const std::string& suffix, double symbol_rate,
                             MetricsRecord* rec);

// Converts the SER points of a relay-ordering run into rows (x = SNR in
// dB, metric = "ser_<arm>").
void append_ser_metrics(const RunResult& r, MetricsRecord* rec);

// Scenario echo lines for the CSV header block.
std::vector<std::string> scenario_header(const Scenario& s);

// Long-format CSV: '#'-prefixed header block, then x,metric,value,ci95.
// Formatting is locale-independent and stable across runs.
std::string to_csv(const MetricsRecord& rec);

}  // namespace coopgeo
