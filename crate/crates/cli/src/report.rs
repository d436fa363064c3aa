//! Instance analysis report (TOML). Arms are numbered from 1.

use conbandit::gaps::{all_infeasible_rate, two_arm_rate};
use conbandit::{classify_instance, ArmClass, BanditInstance};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArmRecord {
    pub arm: usize,
    pub objective: f64,
    pub constraint: f64,
    pub class: ArmClass,
    pub delta: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoArmRecord {
    pub case: u8,
    pub rate_gap_squared: f64,
    pub rate_case_specific: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllInfeasibleRecord {
    pub rate: f64,
    pub min_violation_h1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub instance_id: String,
    pub tau: f64,
    pub a1: f64,
    pub a2: f64,
    pub feasible: bool,
    pub optimal_arm: usize,
    pub ordering: Vec<usize>,
    pub h1: f64,
    pub h2: f64,
    pub arms: Vec<ArmRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_arm_bound: Option<TwoArmRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_infeasible_bound: Option<AllInfeasibleRecord>,
}

pub fn analyze(instance_id: &str, instance: &BanditInstance) -> conbandit::Result<AnalysisReport> {
    let an = classify_instance(instance)?;
    let arms = (0..instance.len())
        .map(|i| ArmRecord {
            arm: i + 1,
            objective: instance.mean(i).objective,
            constraint: instance.mean(i).constraint,
            class: an.classes[i],
            delta: an.delta_to_opt[i],
            gap: an.gap_to_opt[i],
        })
        .collect();
    let two_arm_bound = if instance.len() == 2 {
        let r = two_arm_rate(instance)?;
        Some(TwoArmRecord {
            case: r.case.number(),
            rate_gap_squared: r.rate_gap_squared,
            rate_case_specific: r.rate_case_specific,
        })
    } else {
        None
    };
    let all_infeasible_bound = if an.feasible {
        None
    } else {
        let b = all_infeasible_rate(instance)?;
        Some(AllInfeasibleRecord {
            rate: b.rate,
            min_violation_h1: b.min_violation_h1,
        })
    };
    Ok(AnalysisReport {
        instance_id: instance_id.to_string(),
        tau: instance.tau(),
        a1: instance.a1(),
        a2: instance.a2(),
        feasible: an.feasible,
        optimal_arm: an.optimal_arm + 1,
        ordering: an.ordering.iter().map(|i| i + 1).collect(),
        h1: an.h1,
        h2: an.h2,
        arms,
        two_arm_bound,
        all_infeasible_bound,
    })
}

pub fn to_toml(report: &AnalysisReport) -> String {
    toml::to_string(report).expect("report serialises")
}
