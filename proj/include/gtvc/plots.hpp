#pragma once

#include <span>
#include <string>
#include <vector>

#include "gtvc/groundtruth.hpp"
#include "gtvc/sweep.hpp"

namespace gtvc {

/// Writes excess_risk_vs_n.svg and disagreement_vs_n.svg (median over seeds,
/// one curve per regime) into out_dir and returns the written paths. An empty
/// filter keeps every regime; a filter that matches nothing throws
/// std::invalid_argument naming the available regimes.
std::vector<std::string> emit_plots(const RegimeReport& report, const std::string& out_dir,
                                    const std::vector<std::string>& regime_filter = {});

/// Scatter of a 2-D cloud colored by a value in [0, 1] (labels or u*).
void emit_scatter(const LabeledCloud& cloud, std::span<const double> values, const std::string& title,
                  const std::string& path);

}  // namespace gtvc
