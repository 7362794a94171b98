//! Serialization views. JSON is the canonical structured output; DOT,
//! GraphML, and CSV are derived views. The DOT subset emitted here parses
//! back losslessly (export → parse → export is a fixpoint).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use seqnet_core::assoc::WeightedNetwork;
use seqnet_core::ci::TestResult;
use seqnet_core::genomics::{AdditiveModelFit, KinshipMatrix};
use seqnet_core::graph::{Dag, LabelledGraph, Mark};
use seqnet_core::sim::{
    EffectPattern, PowerTable, RecoveryTable, SnpScenario,
};

use crate::{CliError, Result};

/// Test result as emitted on standard output and in JSON-lines logs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TestResultDto {
    pub test: String,
    pub x: String,
    pub y: String,
    pub cond: Vec<String>,
    pub statistic: f64,
    pub p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub df: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub null_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub null_sd: Option<f64>,
    pub n_effective: u64,
}

impl From<&TestResult> for TestResultDto {
    fn from(r: &TestResult) -> Self {
        TestResultDto {
            test: r.test_name.to_string(),
            x: r.x.clone(),
            y: r.y.clone(),
            cond: r.cond.clone(),
            statistic: r.statistic,
            p: r.p_value,
            df: r.df,
            null_mean: r.null_mean,
            null_sd: r.null_sd,
            n_effective: r.n_effective,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EdgeDto {
    pub from: String,
    pub to: String,
    pub mark: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

/// Canonical graph serialization: node list in insertion order plus an
/// edge list with explicit marks.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphDto {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeDto>,
}

fn mark_name(mark: Mark) -> &'static str {
    match mark {
        Mark::Directed => "directed",
        Mark::Undirected => "undirected",
    }
}

impl GraphDto {
    pub fn from_graph(g: &LabelledGraph) -> Self {
        GraphDto {
            nodes: g.nodes().to_vec(),
            edges: g
                .edges()
                .into_iter()
                .map(|e| EdgeDto {
                    from: e.from,
                    to: e.to,
                    mark: mark_name(e.mark).to_string(),
                    weight: None,
                })
                .collect(),
        }
    }

    pub fn from_weighted(net: &WeightedNetwork) -> Self {
        let mut dto = GraphDto::from_graph(&net.graph);
        for e in &mut dto.edges {
            e.weight = net.weight(&e.from, &e.to);
        }
        dto
    }

    /// Render every edge undirected. A presentation option for gene-gene
    /// networks; no structural semantics.
    pub fn undirected_view(mut self) -> Self {
        for e in &mut self.edges {
            e.mark = "undirected".to_string();
        }
        self
    }

    pub fn to_graph(&self) -> Result<LabelledGraph> {
        let names: Vec<&str> = self.nodes.iter().map(String::as_str).collect();
        let mut g = LabelledGraph::new(&names)?;
        for e in &self.edges {
            match e.mark.as_str() {
                "directed" => g.add_directed(&e.from, &e.to)?,
                "undirected" => g.add_undirected(&e.from, &e.to)?,
                other => {
                    return Err(CliError::Format(format!(
                        "unknown edge mark {other:?} (expected directed or undirected)"
                    )))
                }
            }
        }
        Ok(g)
    }

    /// Interpret as a DAG; every edge must be directed and acyclic.
    pub fn to_dag(&self) -> Result<Dag> {
        if let Some(e) = self.edges.iter().find(|e| e.mark != "directed") {
            return Err(CliError::Format(format!(
                "edge {} - {} is not directed; a DAG input needs directed edges only",
                e.from, e.to
            )));
        }
        Ok(Dag::from_graph(self.to_graph()?)?)
    }

    pub fn weights(&self) -> BTreeMap<(String, String), f64> {
        self.edges
            .iter()
            .filter_map(|e| {
                e.weight.map(|w| {
                    let (a, b) = if e.from <= e.to {
                        (e.from.clone(), e.to.clone())
                    } else {
                        (e.to.clone(), e.from.clone())
                    };
                    ((a, b), w)
                })
            })
            .collect()
    }
}

/// Shrinkage network output: the estimated intensity plus the graph view.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ShrunkNetworkDto {
    pub lambda: f64,
    pub graph: GraphDto,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EffectDto {
    pub snp: String,
    pub g: f64,
}

/// Fitted additive model: `{mu, lambda, effects:[{snp, g}]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FitDto {
    pub mu: f64,
    pub lambda: f64,
    pub effects: Vec<EffectDto>,
}

impl FitDto {
    pub fn from_fit(fit: &AdditiveModelFit) -> Self {
        FitDto {
            mu: fit.mu,
            lambda: fit.lambda,
            effects: fit
                .snp_names
                .iter()
                .zip(&fit.effects)
                .map(|(snp, &g)| EffectDto { snp: snp.clone(), g })
                .collect(),
        }
    }

    /// Rebuild a fit for prediction. The kinship matrix only matters at
    /// fit time, so the flag is not serialized.
    pub fn to_fit(&self) -> AdditiveModelFit {
        AdditiveModelFit {
            mu: self.mu,
            lambda: self.lambda,
            effects: self.effects.iter().map(|e| e.g).collect(),
            snp_names: self.effects.iter().map(|e| e.snp.clone()).collect(),
            kinship_used: false,
        }
    }
}

/// Markov blanket output.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BlanketDto {
    pub target: String,
    pub members: Vec<String>,
}

/// SNP scenario file entry, mirroring the simulation scenario fields.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScenarioDto {
    pub n: usize,
    pub m: usize,
    pub maf: f64,
    pub pattern: String,
    pub h2: f64,
    pub causal: Vec<usize>,
    pub ld_rho: f64,
    pub seed: u64,
}

impl ScenarioDto {
    pub fn to_scenario(&self) -> Result<SnpScenario> {
        let s = SnpScenario {
            n: self.n,
            m: self.m,
            maf: self.maf,
            pattern: EffectPattern::from_name(&self.pattern)?,
            h2: self.h2,
            causal: self.causal.clone(),
            ld_rho: self.ld_rho,
            seed: self.seed,
        };
        s.validate()?;
        Ok(s)
    }
}

/// Parse a scenario file holding either one scenario object or an array.
pub fn parse_scenarios(text: &str) -> Result<Vec<SnpScenario>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(ScenarioDto),
        Many(Vec<ScenarioDto>),
    }
    let parsed: OneOrMany = serde_json::from_str(text)
        .map_err(|e| CliError::Format(format!("scenario file: {e}")))?;
    let dtos = match parsed {
        OneOrMany::One(d) => vec![d],
        OneOrMany::Many(v) => v,
    };
    if dtos.is_empty() {
        return Err(CliError::Format("scenario file holds no scenarios".into()));
    }
    dtos.iter().map(ScenarioDto::to_scenario).collect()
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PowerRowDto {
    pub scenario: String,
    pub test: String,
    pub n: usize,
    pub replicates: u64,
    pub rejections: u64,
    pub untestable: u64,
    pub rejection_rate: f64,
}

pub fn power_rows(table: &PowerTable) -> Vec<PowerRowDto> {
    table
        .rows
        .iter()
        .map(|r| PowerRowDto {
            scenario: r.scenario.clone(),
            test: r.test.name().to_string(),
            n: r.n,
            replicates: r.replicates,
            rejections: r.rejections,
            untestable: r.untestable,
            rejection_rate: r.rejection_rate(),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RecoveryRowDto {
    pub replicate: u64,
    pub shd: u64,
    pub precision: f64,
    pub recall: f64,
}

pub fn recovery_rows(table: &RecoveryTable) -> Vec<RecoveryRowDto> {
    table
        .rows
        .iter()
        .map(|r| RecoveryRowDto {
            replicate: r.replicate,
            shd: r.shd,
            precision: r.precision,
            recall: r.recall,
        })
        .collect()
}

/// Serialize any row collection as CSV with a header derived from the
/// serde field names.
pub fn rows_to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| CliError::Format(format!("csv: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Format(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Format(format!("csv: {e}")))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value).map_err(|e| CliError::Format(format!("json: {e}")))
}

/// Kinship matrix view used by `simulate` fixtures and debugging.
pub fn kinship_names(k: &KinshipMatrix) -> Vec<String> {
    (0..k.n()).map(|i| format!("s{i}")).collect()
}

fn dot_quote(name: &str) -> String {
    format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT text for a graph: every node on its own line, directed edges as
/// `a -> b`, undirected ones as `a -> b [dir=none]`, weights as a
/// bracketed attribute. Deterministic given the graph.
pub fn to_dot(dto: &GraphDto) -> String {
    let mut out = String::from("digraph g {\n");
    for node in &dto.nodes {
        out.push_str(&format!("  {};\n", dot_quote(node)));
    }
    for e in &dto.edges {
        let mut attrs: Vec<String> = Vec::new();
        if e.mark == "undirected" {
            attrs.push("dir=none".to_string());
        }
        if let Some(w) = e.weight {
            attrs.push(format!("weight=\"{w}\""));
        }
        let attr_text = if attrs.is_empty() {
            String::new()
        } else {
            format!(" [{}]", attrs.join(", "))
        };
        out.push_str(&format!(
            "  {} -> {}{};\n",
            dot_quote(&e.from),
            dot_quote(&e.to),
            attr_text
        ));
    }
    out.push_str("}\n");
    out
}

fn dot_unquote(token: &str) -> Result<String> {
    let t = token.trim();
    if let Some(inner) = t.strip_prefix('"').and_then(|s| s.strip_suffix('"')) {
        Ok(inner.replace("\\\"", "\"").replace("\\\\", "\\"))
    } else if !t.is_empty() && t.chars().all(|c| c.is_alphanumeric() || c == '_') {
        Ok(t.to_string())
    } else {
        Err(CliError::Format(format!("dot: cannot parse identifier {token:?}")))
    }
}

/// Parse the DOT subset `to_dot` emits: a `digraph` block of node
/// statements and edge statements with optional `dir=none` / `weight`
/// attributes.
pub fn parse_dot(text: &str) -> Result<GraphDto> {
    let body = text.trim();
    let body = body
        .strip_prefix("digraph")
        .ok_or_else(|| CliError::Format("dot: expected a digraph block".into()))?;
    let open = body
        .find('{')
        .ok_or_else(|| CliError::Format("dot: missing {".into()))?;
    let close = body
        .rfind('}')
        .ok_or_else(|| CliError::Format("dot: missing }".into()))?;
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for raw in body[open + 1..close].split(';') {
        let stmt = raw.trim();
        if stmt.is_empty() {
            continue;
        }
        let (head, attrs) = match stmt.find('[') {
            Some(i) => {
                let end = stmt.rfind(']').ok_or_else(|| {
                    CliError::Format(format!("dot: unterminated attributes in {stmt:?}"))
                })?;
                (stmt[..i].trim(), Some(stmt[i + 1..end].trim()))
            }
            None => (stmt, None),
        };
        let mut mark = "directed".to_string();
        let mut weight = None;
        if let Some(attr_text) = attrs {
            for attr in attr_text.split(',') {
                let attr = attr.trim();
                if attr == "dir=none" {
                    mark = "undirected".to_string();
                } else if let Some(v) = attr.strip_prefix("weight=") {
                    let v = v.trim_matches('"');
                    weight = Some(v.parse::<f64>().map_err(|_| {
                        CliError::Format(format!("dot: bad weight {v:?}"))
                    })?);
                } else {
                    return Err(CliError::Format(format!(
                        "dot: unsupported attribute {attr:?}"
                    )));
                }
            }
        }
        if let Some((from, to)) = head.split_once("->") {
            edges.push(EdgeDto {
                from: dot_unquote(from)?,
                to: dot_unquote(to)?,
                mark,
                weight,
            });
        } else {
            nodes.push(dot_unquote(head)?);
        }
    }
    Ok(GraphDto { nodes, edges })
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// GraphML document for a graph; undirected edges carry
/// `directed="false"`, weights go into a `weight` data key.
pub fn to_graphml(dto: &GraphDto) -> String {
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n\
         <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n\
         <graph id=\"g\" edgedefault=\"directed\">\n",
    );
    for node in &dto.nodes {
        out.push_str(&format!("  <node id=\"{}\"/>\n", xml_escape(node)));
    }
    for e in &dto.edges {
        let directed = if e.mark == "undirected" { " directed=\"false\"" } else { "" };
        match e.weight {
            Some(w) => out.push_str(&format!(
                "  <edge source=\"{}\" target=\"{}\"{}><data key=\"weight\">{w}</data></edge>\n",
                xml_escape(&e.from),
                xml_escape(&e.to),
                directed
            )),
            None => out.push_str(&format!(
                "  <edge source=\"{}\" target=\"{}\"{}/>\n",
                xml_escape(&e.from),
                xml_escape(&e.to),
                directed
            )),
        }
    }
    out.push_str("</graph>\n</graphml>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_dto() -> GraphDto {
        GraphDto {
            nodes: vec!["a".into(), "b".into(), "c d".into()],
            edges: vec![
                EdgeDto {
                    from: "a".into(),
                    to: "b".into(),
                    mark: "directed".into(),
                    weight: None,
                },
                EdgeDto {
                    from: "b".into(),
                    to: "c d".into(),
                    mark: "undirected".into(),
                    weight: Some(0.75),
                },
            ],
        }
    }

    #[test]
    fn graph_json_round_trip() {
        let dto = sample_dto();
        let json = to_json(&dto).unwrap();
        let back: GraphDto = serde_json::from_str(&json).unwrap();
        assert_eq!(dto, back);
        let g = back.to_graph().unwrap();
        assert!(g.has_directed("a", "b"));
        assert!(g.has_undirected("b", "c d"));
        assert_eq!(GraphDto::from_graph(&g).nodes, dto.nodes);
    }

    #[test]
    fn dot_export_parse_export_is_a_fixpoint() {
        let dto = sample_dto();
        let dot = to_dot(&dto);
        let parsed = parse_dot(&dot).unwrap();
        assert_eq!(to_dot(&parsed), dot);
        assert_eq!(parsed, dto);
    }

    #[test]
    fn empty_graph_documents_are_valid() {
        let dto = GraphDto { nodes: vec![], edges: vec![] };
        assert_eq!(to_dot(&dto), "digraph g {\n}\n");
        assert_eq!(parse_dot(&to_dot(&dto)).unwrap(), dto);
        assert!(to_graphml(&dto).contains("</graphml>"));
    }

    #[test]
    fn directed_edge_renders_one_statement() {
        let dto = GraphDto {
            nodes: vec!["A".into(), "B".into()],
            edges: vec![EdgeDto {
                from: "A".into(),
                to: "B".into(),
                mark: "directed".into(),
                weight: None,
            }],
        };
        let dot = to_dot(&dto);
        assert!(dot.contains("\"A\" -> \"B\";"));
        assert!(!dot.contains("dir=none"));
        let xml = to_graphml(&dto);
        assert!(xml.contains("<edge source=\"A\" target=\"B\"/>"));
    }

    #[test]
    fn undirected_view_changes_marks_only() {
        let viewed = sample_dto().undirected_view();
        assert!(viewed.edges.iter().all(|e| e.mark == "undirected"));
        assert_eq!(viewed.edges[1].weight, Some(0.75));
    }

    #[test]
    fn dag_dto_rejects_undirected_edges() {
        let dto = sample_dto();
        assert!(dto.to_dag().is_err());
        let directed = GraphDto {
            nodes: vec!["a".into(), "b".into()],
            edges: vec![EdgeDto {
                from: "a".into(),
                to: "b".into(),
                mark: "directed".into(),
                weight: None,
            }],
        };
        let dag = directed.to_dag().unwrap();
        assert_eq!(dag.topological_order(), vec!["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn scenario_files_accept_object_or_array() {
        let one = r#"{"n":100,"m":5,"maf":0.3,"pattern":"recessive","h2":0.05,
                      "causal":[0],"ld_rho":0.0,"seed":7}"#;
        let parsed = parse_scenarios(one).unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0].pattern, EffectPattern::Recessive);

        let many = format!("[{one},{one}]");
        assert_eq!(parse_scenarios(&many).unwrap().len(), 2);

        let bad = one.replace("recessive", "sideways");
        assert!(parse_scenarios(&bad).is_err());
        assert!(parse_scenarios("[]").is_err());
    }

    #[test]
    fn fit_dto_round_trips_for_prediction() {
        let fit = AdditiveModelFit {
            mu: 1.5,
            lambda: 0.25,
            effects: vec![0.1, -0.2],
            snp_names: vec!["s1".into(), "s2".into()],
            kinship_used: true,
        };
        let dto = FitDto::from_fit(&fit);
        let json = to_json(&dto).unwrap();
        let back: FitDto = serde_json::from_str(&json).unwrap();
        let rebuilt = back.to_fit();
        assert_eq!(rebuilt.mu, fit.mu);
        assert_eq!(rebuilt.effects, fit.effects);
        assert_eq!(rebuilt.snp_names, fit.snp_names);
    }

    #[test]
    fn csv_rows_have_serde_headers() {
        let rows = vec![PowerRowDto {
            scenario: "s".into(),
            test: "jt".into(),
            n: 100,
            replicates: 200,
            rejections: 150,
            untestable: 0,
            rejection_rate: 0.75,
        }];
        let csv = rows_to_csv(&rows).unwrap();
        assert!(csv.starts_with(
            "scenario,test,n,replicates,rejections,untestable,rejection_rate\n"
        ));
        assert!(csv.contains("s,jt,100,200,150,0,0.75"));
    }
}
