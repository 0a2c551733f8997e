use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use cstar_core::classify::{
    decide_pair, graph_trace_feasibility, stability_of_unique_ideal, StabilityVerdict, TraceFeasibility,
    TwoVertexParams,
};
use cstar_core::graph::{classify_vertices, vertex_matrix, Graph, VertexSet};
use cstar_core::ktheory::{assemble_k_six, graph_k, order_cone, KSixInvariant, KTheoryError};
use cstar_core::structure::{
    case_tag, condition_k, ideal_lattice, largest_proper_ideal, saturated_hereditary_sets, unique_ideal_structure,
    IdealLattice,
};
use cstar_core::verdict::{Answer, Verdict};

use crate::{
    check_enumeration_bound, CliError, Command, CommandEcho, InputDigest, Inputs, Outcome, Report, EXIT_OK,
    EXIT_OUT_OF_SCOPE, EXIT_UNKNOWN,
};

/// What a command produced when its inputs loaded.
struct Body {
    result: Value,
    text: String,
    exit_code: i32,
    error: Option<String>,
}

impl Body {
    fn ok(result: Value, text: String) -> Self {
        Body {
            result,
            text,
            exit_code: EXIT_OK,
            error: None,
        }
    }
}

pub(crate) fn dispatch(cmd: &Command) -> Outcome {
    let (name, inputs, ideal) = match cmd {
        Command::Analyze(i) => ("analyze", i, None),
        Command::Ktheory { inputs, ideal } => ("ktheory", inputs, ideal.as_ref()),
        Command::Ideals(i) => ("ideals", i, None),
        Command::Classify(i) => ("classify", i, None),
        Command::Stability(i) => ("stability", i, None),
    };
    let command = CommandEcho {
        name: name.to_string(),
        inputs: inputs.labels(),
        ideal: ideal.cloned(),
    };
    let mut digests = Vec::new();
    let body = run_command(cmd, inputs, &mut digests);
    let (report, text) = match body {
        Ok(b) => {
            let text = format!("{}{}", header(&command, &digests), b.text);
            let report = Report {
                command,
                inputs: digests,
                result: Some(b.result),
                error: b.error,
                exit_code: b.exit_code,
            };
            (report, text)
        }
        Err(e) => {
            let report = Report {
                command,
                inputs: digests,
                result: None,
                error: Some(e.to_string()),
                exit_code: e.exit_code(),
            };
            (report, String::new())
        }
    };
    Outcome { report, text }
}

fn run_command(cmd: &Command, inputs: &Inputs, digests: &mut Vec<InputDigest>) -> Result<Body, CliError> {
    match cmd {
        Command::Analyze(_) => {
            let g = single(inputs, digests)?;
            check_enumeration_bound(std::slice::from_ref(&g))?;
            Ok(analyze(&g))
        }
        Command::Ideals(_) => {
            let g = single(inputs, digests)?;
            check_enumeration_bound(std::slice::from_ref(&g))?;
            Ok(ideals(&g))
        }
        Command::Ktheory { ideal, .. } => {
            let g = single(inputs, digests)?;
            ktheory(&g, ideal.as_deref())
        }
        Command::Classify(_) => {
            let gs = inputs.load(2, digests)?;
            check_enumeration_bound(&gs)?;
            Ok(classify(&gs[0], &gs[1]))
        }
        Command::Stability(_) => {
            let g = single(inputs, digests)?;
            check_enumeration_bound(std::slice::from_ref(&g))?;
            Ok(stability(&g))
        }
    }
}

fn single(inputs: &Inputs, digests: &mut Vec<InputDigest>) -> Result<Graph, CliError> {
    Ok(inputs.load(1, digests)?.remove(0))
}

fn header(cmd: &CommandEcho, digests: &[InputDigest]) -> String {
    let mut out = format!("cstar {}\n", cmd.name);
    for d in digests {
        let _ = writeln!(out, "input {} (sha256 {})", d.source, &d.sha256[..16]);
    }
    out
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("core types serialize")
}

fn names(g: &Graph, s: &VertexSet) -> Vec<String> {
    s.iter().map(|v| g.name(v).to_string()).collect()
}

fn set_text(g: &Graph, s: &VertexSet) -> String {
    format!("{{{}}}", names(g, s).join(", "))
}

fn lattice_value(g: &Graph, l: &IdealLattice) -> Value {
    let n = l.len();
    let order: Vec<[usize; 2]> = (0..n)
        .flat_map(|i| (0..n).map(move |j| [i, j]))
        .filter(|&[i, j]| i != j && l.leq(i, j))
        .collect();
    json!({
        "size": n,
        "pairs": l.pairs.iter().map(|p| json!({"h": names(g, &p.h), "s": names(g, &p.s)})).collect::<Vec<_>>(),
        "order": order,
        "bottom": l.bottom(),
        "top": l.top(),
    })
}

fn lattice_text(g: &Graph, l: &IdealLattice, out: &mut String) {
    let _ = writeln!(out, "ideal lattice: {} admissible pairs", l.len());
    for (i, p) in l.pairs.iter().enumerate() {
        let _ = writeln!(out, "  {i}: H = {}, S = {}", set_text(g, &p.h), set_text(g, &p.s));
    }
}

fn analyze(g: &Graph) -> Body {
    let cls = classify_vertices(g);
    let sets = saturated_hereditary_sets(g);
    let lattice = ideal_lattice(g);
    let k = condition_k(g);
    let unique = unique_ideal_structure(g);
    let largest = largest_proper_ideal(g);
    let tag = unique.as_ref().and_then(|u| case_tag(g, &u.h).ok());

    let result = json!({
        "vertices": g.names(),
        "matrix": vertex_matrix(g).entries,
        "classification": {
            "sinks": names(g, &cls.sinks),
            "infinite_emitters": names(g, &cls.infinite_emitters),
            "regular": names(g, &cls.regular),
            "row_finite": cls.row_finite,
        },
        "saturated_hereditary_sets": sets.iter().map(|s| names(g, s)).collect::<Vec<_>>(),
        "ideal_lattice": lattice_value(g, &lattice),
        "simple": lattice.len() == 2,
        "condition_k": value(&k),
        "unique_ideal": unique.as_ref().map(|u| json!({
            "h": names(g, &u.h),
            "checks": value(&u.checks),
            "case_tag": tag.map(|t| t.to_string()),
        })),
        "largest_proper_ideal": match &largest {
            Ok(Some(p)) => json!({"h": names(g, &p.h), "s": names(g, &p.s)}),
            Ok(None) => Value::Null,
            Err(e) => json!({"error": e.to_string()}),
        },
    });

    let mut t = String::new();
    let _ = writeln!(t, "vertices: {}", g.names().join(" "));
    let _ = writeln!(t, "sinks: {}", set_text(g, &cls.sinks));
    let _ = writeln!(t, "infinite emitters: {}", set_text(g, &cls.infinite_emitters));
    let _ = writeln!(t, "regular: {}", set_text(g, &cls.regular));
    let listed: Vec<String> = sets.iter().map(|s| set_text(g, s)).collect();
    let _ = writeln!(t, "saturated hereditary sets ({}): {}", sets.len(), listed.join(" "));
    lattice_text(g, &lattice, &mut t);
    let _ = writeln!(t, "simple: {}", lattice.len() == 2);
    let _ = writeln!(t, "Condition (K): {}", if k.holds { "holds" } else { "fails" });
    match (&unique, tag) {
        (Some(u), Some(tag)) => {
            let _ = writeln!(t, "unique ideal: H = {}, case {tag}", set_text(g, &u.h));
        }
        (Some(u), None) => {
            let _ = writeln!(t, "unique ideal: H = {}", set_text(g, &u.h));
        }
        (None, _) => t.push_str("unique ideal: none\n"),
    }
    match &largest {
        Ok(Some(p)) => {
            let _ = writeln!(t, "largest proper ideal: H = {}, S = {}", set_text(g, &p.h), set_text(g, &p.s));
        }
        Ok(None) => t.push_str("largest proper ideal: none\n"),
        Err(e) => {
            let _ = writeln!(t, "largest proper ideal: {e}");
        }
    }
    Body::ok(result, t)
}

fn ideals(g: &Graph) -> Body {
    let lattice = ideal_lattice(g);
    let verified = lattice.verify_partial_order();
    let result = json!({
        "vertices": g.names(),
        "ideal_lattice": lattice_value(g, &lattice),
        "partial_order_verified": verified,
    });
    let mut t = String::new();
    lattice_text(g, &lattice, &mut t);
    let n = lattice.len();
    for i in 0..n {
        let above: Vec<String> = (0..n).filter(|&j| j != i && lattice.leq(i, j)).map(|j| j.to_string()).collect();
        if !above.is_empty() {
            let _ = writeln!(t, "  {i} <= {}", above.join(", "));
        }
    }
    let _ = writeln!(t, "partial order verified: {verified}");
    Body::ok(result, t)
}

fn ktheory(g: &Graph, ideal: Option<&[String]>) -> Result<Body, CliError> {
    let k = graph_k(g);
    let cone = order_cone(g);
    let mut result = json!({
        "vertices": g.names(),
        "k0": value(&*k.k0),
        "k1": value(&*k.k1),
        "order": value(&cone),
    });
    let mut t = String::new();
    let _ = writeln!(t, "K0 = {}", k.k0);
    let _ = writeln!(t, "K1 = {}", k.k1);
    let _ = writeln!(t, "order: {}", cone.label());
    let Some(ideal) = ideal else {
        return Ok(Body::ok(result, t));
    };
    let wanted: Vec<&str> = ideal.iter().map(String::as_str).filter(|s| !s.is_empty()).collect();
    let h = g
        .vertex_set(&wanted)
        .map_err(|e| CliError::Usage(format!("--ideal: {e}")))?;
    result["ideal"] = json!(names(g, &h));
    let _ = writeln!(t, "ideal H = {}", set_text(g, &h));
    match assemble_k_six(g, &h) {
        Ok(six) => {
            six_text(&six, &mut t);
            result["six_term"] = value(&six);
            Ok(Body::ok(result, t))
        }
        Err(e) => {
            let msg = match &e {
                KTheoryError::BreakingVertices(vs) => format!(
                    "breaking vertices present: {}",
                    set_text(g, &VertexSet::from_indices(g.len(), vs.iter().copied()))
                ),
                other => other.to_string(),
            };
            result["six_term"] = Value::Null;
            Ok(Body {
                result,
                text: t,
                exit_code: EXIT_OUT_OF_SCOPE,
                error: Some(format!("ideal out of scope: {msg}")),
            })
        }
    }
}

fn six_text(k: &KSixInvariant, t: &mut String) {
    let _ = writeln!(t, "case: {}", k.case_tag);
    let _ = writeln!(t, "K0: {} -> {} -> {}", k.k0_ideal, k.k0_alg, k.k0_quot);
    let _ = writeln!(t, "K1: {} -> {} -> {}", k.k1_ideal, k.k1_alg, k.k1_quot);
    let _ = writeln!(t, "i0 = {}", matrix_text(&k.i0.normal_matrix()));
    let _ = writeln!(t, "p0 = {}", matrix_text(&k.p0.normal_matrix()));
    let _ = writeln!(t, "index map: {:?}, exponential map: {:?}", k.index_map, k.exp_map);
    let _ = writeln!(t, "outer orders: {} / {}", k.ideal_cone.label(), k.quot_cone.label());
    let _ = writeln!(t, "K0 row verified exact: {}", k.k0_row_exact);
}

fn matrix_text(m: &cstar_core::ktheory::IntMatrix) -> String {
    serde_json::to_string(m).expect("matrices serialize")
}

fn classify(g: &Graph, h: &Graph) -> Body {
    let verdict = decide_pair(g, h);
    let params: Vec<Option<TwoVertexParams>> = [g, h]
        .iter()
        .map(|x| TwoVertexParams::from_graph(x).ok())
        .collect();
    let exit_code = match verdict.answer {
        Answer::Yes | Answer::No => EXIT_OK,
        Answer::Unknown => EXIT_UNKNOWN,
    };
    let result = json!({
        "verdict": value(&verdict),
        "two_vertex": value(&params),
    });
    let mut t = String::new();
    for (i, p) in params.iter().enumerate() {
        if let Some(p) = p {
            let swap = if p.swapped { " (vertices exchanged so that c <= b)" } else { "" };
            let _ = writeln!(t, "graph {}: {p}{swap}", i + 1);
        }
    }
    verdict_text(&verdict, &mut t);
    Body {
        result,
        text: t,
        exit_code,
        error: None,
    }
}

fn verdict_text(v: &Verdict, t: &mut String) {
    let _ = writeln!(t, "verdict: {:?}", v.answer);
    let _ = writeln!(t, "route: {}", v.route);
    if let Some(w) = &v.witness {
        let _ = writeln!(t, "witness: {}", serde_json::to_string(w).expect("witnesses serialize"));
    }
    if let Some(o) = &v.obstruction {
        let _ = writeln!(t, "obstruction: {}", serde_json::to_string(o).expect("obstructions serialize"));
    }
    for n in &v.notes {
        let _ = writeln!(t, "note: {n}");
    }
}

fn stability(g: &Graph) -> Body {
    let trace = graph_trace_feasibility(g);
    let trace_verified = trace.verify(g);
    let mut t = String::new();
    let (stab, error) = match stability_of_unique_ideal(g) {
        Ok(s) => (Some(s), None),
        Err(e) => (None, Some(format!("stability skipped: {e}"))),
    };
    let stab_value = stab.as_ref().map(|s| {
        let verified = match s {
            StabilityVerdict::Stable { ideal, witness } => {
                witness.verify(g, &VertexSet::from_indices(g.len(), ideal.iter().copied()))
            }
            StabilityVerdict::NonunitalAF => true,
        };
        match s {
            StabilityVerdict::Stable { ideal, .. } => {
                let h = VertexSet::from_indices(g.len(), ideal.iter().copied());
                let _ = writeln!(t, "ideal {}: Stable (witness verified: {verified})", set_text(g, &h));
            }
            StabilityVerdict::NonunitalAF => t.push_str("ideal: nonunital AF\n"),
        }
        json!({"verdict": value(s), "witness_verified": verified})
    });
    if let Some(e) = &error {
        let _ = writeln!(t, "{e}");
    }
    match &trace {
        TraceFeasibility::Exists { g: x } => {
            let xs: Vec<String> = x.iter().map(ToString::to_string).collect();
            let _ = writeln!(t, "graph trace: exists, g = ({})", xs.join(", "));
        }
        TraceFeasibility::None { certificate } => {
            let ys: Vec<String> = certificate.y.iter().map(ToString::to_string).collect();
            let _ = writeln!(t, "graph trace: none, certificate y = ({})", ys.join(", "));
        }
    }
    let _ = writeln!(t, "trace answer verified: {trace_verified}");
    let result = json!({
        "vertices": g.names(),
        "stability": stab_value,
        "trace": value(&trace),
        "trace_verified": trace_verified,
    });
    Body {
        result,
        text: t,
        exit_code: if error.is_some() { EXIT_OUT_OF_SCOPE } else { EXIT_OK },
        error,
    }
}
