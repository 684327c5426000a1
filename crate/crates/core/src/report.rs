//! One-shot analysis of a graph and its JSON / CSV rendering.

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;
use crate::graph::{Bipartition, EdgeRef, Graph};
use crate::matrix::MatrixKind;
use crate::procedures::RemovalTrace;
use crate::sensitivity::{
    fiedler_impact_matrix, fiedler_vector_condition, perron_impact_matrix, perron_vector_condition,
    perron_vector_condition_lower_bound, structured_condition,
};
use crate::spectral::{BipartivityReport, Solver, SpectrumSlice};

/// Number of ranked edges kept per impact matrix by default.
pub const DEFAULT_TOP: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub weighted: bool,
    pub connected: bool,
    pub components: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerronSection {
    /// `lambda_n`
    pub rho: f64,
    /// `lambda_{n-1}`
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_largest: Option<f64>,
    /// `lambda_{n-2}`
    #[serde(skip_serializing_if = "Option::is_none")]
    pub third_largest: Option<f64>,
    /// `1 / (lambda_n - lambda_{n-1})`; absent when `rho` is multiple.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_u: Option<f64>,
    /// Structured condition number; connected graphs only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_structured: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_u_lower_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiedlerSection {
    /// `alpha_2`; absent for a single node.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha4: Option<f64>,
    /// Condition number of the eigenvector of the smallest nonzero Laplacian
    /// eigenvalue; absent when that eigenvalue is multiple.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_v: Option<f64>,
    /// The graph is connected and `alpha_2` is simple.
    pub simple: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankedEdge {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

impl From<(EdgeRef, f64)> for RankedEdge {
    fn from((e, value): (EdgeRef, f64)) -> Self {
        RankedEdge { i: e.i, j: e.j, value }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopImpacts {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perron: Option<Vec<RankedEdge>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiedler: Option<Vec<RankedEdge>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub graph: GraphSummary,
    pub perron: PerronSection,
    pub fiedler: FiedlerSection,
    pub top_impacts: TopImpacts,
    /// Absent when the graph has isolated nodes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bipartivity: Option<BipartivityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bipartition: Option<Bipartition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub removal: Option<RemovalTrace>,
}

fn ascending(mut values: Vec<f64>, which: MatrixKind) -> SpectrumSlice {
    values.sort_by(f64::total_cmp);
    SpectrumSlice { values, which }
}

/// Spectral summary, conditioning and the `top` strongest edges of both
/// impact matrices. Works on disconnected graphs; quantities that need a
/// connected graph are then left out.
pub fn analyze(solver: &Solver, g: &Graph, top: usize) -> Result<AnalysisReport> {
    let n = g.node_count();
    let components = g.connected_components().len();
    let connected = components == 1;

    let adj_top = solver.adjacency_top(g, 3.min(n))?;
    let lap_low = solver.laplacian_bottom(g, (components + 2).max(4).min(n))?;
    let adj_slice = ascending(adj_top.clone(), MatrixKind::Adjacency);
    let lap_slice = ascending(lap_low.clone(), MatrixKind::Laplacian);

    let mut perron = PerronSection {
        rho: adj_top[0],
        second_largest: adj_top.get(1).copied(),
        third_largest: adj_top.get(2).copied(),
        kappa_u: perron_vector_condition(&adj_slice),
        kappa_structured: None,
        kappa_u_lower_bound: (n >= 2 && adj_top[0] > 0.0).then(|| perron_vector_condition_lower_bound(n, adj_top[0])),
    };
    let fiedler_simple = connected && n >= 2 && {
        let tol = crate::spectral::simplicity_tol(lap_low.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        lap_low.get(2).is_none_or(|a3| a3 - lap_low[1] > tol)
    };
    let fiedler = FiedlerSection {
        mu: lap_low.get(1).copied(),
        alpha3: lap_low.get(2).copied(),
        alpha4: lap_low.get(3).copied(),
        kappa_v: fiedler_vector_condition(&lap_slice),
        simple: fiedler_simple,
    };

    let mut top_impacts = TopImpacts {
        perron: None,
        fiedler: None,
    };
    if connected && g.edge_count() > 0 {
        let p = solver.perron_pair(g)?;
        perron.kappa_structured = Some(structured_condition(&p.pair.vector, g)?.0);
        let r = perron_impact_matrix(g, &p.pair)?;
        top_impacts.perron = Some(r.top(top).into_iter().map(RankedEdge::from).collect());
        if fiedler_simple {
            let f = solver.fiedler_pair(g)?;
            let r = fiedler_impact_matrix(g, &f.pair)?;
            top_impacts.fiedler = Some(r.top(top).into_iter().map(RankedEdge::from).collect());
        }
    }

    Ok(AnalysisReport {
        graph: GraphSummary {
            nodes: n,
            edges: g.edge_count(),
            weighted: !g.is_unweighted(),
            connected,
            components,
        },
        perron,
        fiedler,
        top_impacts,
        bipartivity: solver.bipartivity(g).ok(),
        bipartition: None,
        removal: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    CsvSummary,
}

/// Rounds to 12 significant digits; negative zero becomes zero.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn round_all(v: &mut Value) {
    match v {
        Value::Number(num) if num.is_f64() => {
            let x = round_significant(num.as_f64().expect("f64 number"));
            *v = serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_all),
        Value::Object(map) => map.values_mut().for_each(round_all),
        _ => {}
    }
}

/// Report as JSON: keys sorted, floats at 12 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report types serialize");
    round_all(&mut v);
    serde_json::to_string_pretty(&v).expect("JSON values serialize")
}

pub const CSV_HEADER: &str = "lambda_n,lambda_n-1,lambda_n-2,kappa_u,alpha_2,alpha_3,alpha_4,kappa_v";

fn cell(x: Option<f64>) -> String {
    match x {
        Some(x) => {
            let s = format!("{x:.4}");
            if s == "-0.0000" {
                "0.0000".into()
            } else {
                s
            }
        }
        None => "-".into(),
    }
}

/// The spectral summary row: `lambda_n, lambda_{n-1}, lambda_{n-2},
/// kappa(u), alpha_2, alpha_3, alpha_4, kappa(v)` at 4 decimals, `-` for
/// values that do not exist or are undefined.
pub fn csv_row(r: &AnalysisReport) -> String {
    [
        Some(r.perron.rho),
        r.perron.second_largest,
        r.perron.third_largest,
        r.perron.kappa_u,
        r.fiedler.mu,
        r.fiedler.alpha3,
        r.fiedler.alpha4,
        r.fiedler.kappa_v,
    ]
    .into_iter()
    .map(cell)
    .collect::<Vec<_>>()
    .join(",")
}

pub fn write_report(r: &AnalysisReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => to_json(r) + "\n",
        ReportFormat::CsvSummary => format!("{CSV_HEADER}\n{}\n", csv_row(r)),
    }
}
