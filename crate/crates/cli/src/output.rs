//! Machine-readable documents mirroring the library's decomposition and
//! verification reports. All exact values are serialized as strings in the
//! polynomial/rational text syntax so they re-parse losslessly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use equires::decompose::{DecompositionResult, Variant};
use equires::oracle::{Sign, VerificationReport};
use equires::polyring::Scalar;

#[derive(Debug, Serialize, Deserialize)]
pub struct CaseDoc {
    pub first_large: bool,
    pub second_large: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ConstantDoc {
    pub block: usize,
    pub value: String,
    pub exponent: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_at: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FactorDoc {
    pub lambda: (Vec<u32>, Vec<u32>),
    /// Serialized u128.
    pub exponent: String,
    pub variables: Vec<String>,
    pub degrees: Vec<u32>,
    pub system: Vec<String>,
    /// Symbolic resultant when it fit under the size cap.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resultant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_at: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PrefactorDoc {
    pub base: u32,
    pub exponent: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DecomposeDoc {
    pub variant: String,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub system_degree: u32,
    pub original_degree: u32,
    pub case: CaseDoc,
    pub variables: Vec<String>,
    pub parameters: Vec<String>,
    pub constant_factors: Vec<ConstantDoc>,
    pub factors: Vec<FactorDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disc_prefactor: Option<PrefactorDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product_at: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CounterexampleDoc {
    pub trial: u64,
    pub point: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub trials_requested: u64,
    pub completed: u64,
    pub skipped_degenerate: u64,
    pub sign: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleDoc>,
}

pub fn scalar_string(s: &Scalar) -> String {
    s.to_string()
}

pub fn point_strings(values: &BTreeMap<String, Scalar>) -> BTreeMap<String, String> {
    values
        .iter()
        .map(|(k, v)| (k.clone(), scalar_string(v)))
        .collect()
}

pub fn variant_name(v: Variant) -> String {
    match v {
        Variant::Resultant => "resultant".to_string(),
        Variant::Discriminant => "discriminant".to_string(),
    }
}

pub fn sign_string(sign: Sign) -> String {
    sign.to_string()
}

pub fn verify_doc(report: &VerificationReport) -> VerifyDoc {
    VerifyDoc {
        trials_requested: report.trials_requested,
        completed: report.completed,
        skipped_degenerate: report.skipped_degenerate,
        sign: sign_string(report.sign),
        verdict: if report.passed() { "pass" } else { "fail" }.to_string(),
        counterexample: report.counterexample.as_ref().map(|ce| CounterexampleDoc {
            trial: ce.trial,
            point: point_strings(&ce.point.values),
            lhs: scalar_string(&ce.lhs),
            rhs: scalar_string(&ce.rhs),
        }),
    }
}

/// Shared skeleton of the decompose document (factor evaluations are filled
/// in by the caller, which owns the options and the optional point).
pub fn decompose_doc_base(result: &DecompositionResult, variables: Vec<String>) -> DecomposeDoc {
    DecomposeDoc {
        variant: variant_name(result.variant),
        n: result.n,
        p: result.p,
        q: result.q,
        system_degree: result.system_degree,
        original_degree: result.original_degree,
        case: CaseDoc {
            first_large: result.case.first_large,
            second_large: result.case.second_large,
        },
        variables,
        parameters: result
            .factors
            .first()
            .map(|f| f.target_ctx().params().to_vec())
            .unwrap_or_default(),
        constant_factors: result
            .constant_factors
            .iter()
            .map(|c| ConstantDoc {
                block: c.block,
                value: c.value.to_string(),
                exponent: c.exponent,
                value_at: None,
            })
            .collect(),
        factors: result
            .factors
            .iter()
            .map(|f| FactorDoc {
                lambda: (
                    f.pair.first.parts().to_vec(),
                    f.pair.second.parts().to_vec(),
                ),
                exponent: f.exponent.to_string(),
                variables: f.target_ctx().main_vars().to_vec(),
                degrees: f.degrees.clone(),
                system: f.system.iter().map(|p| p.to_string()).collect(),
                resultant: None,
                value_at: None,
            })
            .collect(),
        disc_prefactor: result
            .disc_prefactor
            .map(|(base, exponent)| PrefactorDoc { base, exponent }),
        at: None,
        product_at: None,
    }
}
