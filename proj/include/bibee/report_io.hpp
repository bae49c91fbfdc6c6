// Copyright The bibee Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BIBEE_REPORT_IO_HPP
#define BIBEE_REPORT_IO_HPP

#include <iosfwd>

#include <json.hpp>

#include "bibee/experiments.hpp"

namespace bibee
{

using ordered_json = nlohmann::ordered_json;

// seed,index,method,lambda,energy_kcal_mol,truncation_estimate
void write_rows_csv(std::ostream &out, const ComparisonReport &report);
// method,lambda,rmsd,mean_dev_pct,n
void write_summary_csv(std::ostream &out, std::span<const MethodSummary> summary);
// check,violations,configs
void write_checks_csv(std::ostream &out, const ComparisonReport &report);

ordered_json config_to_json(const ExperimentConfig &cfg);
ordered_json report_to_json(const ComparisonReport &report);
ordered_json sweep_to_json(const SweepReport &sweep);
ordered_json energy_to_json(const EnergyResult &e);

// Fields absent from the JSON keep the values already in 'base'. Unknown keys
// are rejected with ParseError.
ExperimentConfig config_from_json(const nlohmann::json &j, ExperimentConfig base = {});

}  // namespace bibee

#endif  // BIBEE_REPORT_IO_HPP
