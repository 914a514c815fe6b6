//! Trained models on disk.
//!
//! Versioned plain text, one file per model. Tree ensembles serialize every
//! node (`split <feature> <threshold> <left> <right> <value>` or
//! `leaf <value>`) in flat preorder layout; the logistic model serializes
//! its vectors. Floats use shortest-round-trip formatting, so a saved model
//! reloads to an identical struct and identical scores.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nids_core::model::{
    ForestModel, GbmModel, LogRegModel, ModelKind, TrainedModel, TreeModel, TreeNode,
};

use crate::error::CliError;

const MAGIC: &str = "nids-model v1";

pub fn model_file_name(kind: ModelKind) -> String {
    format!("model_{kind}.txt")
}

pub fn write_model(path: &Path, model: &TrainedModel) -> Result<(), CliError> {
    let mut text = String::new();
    text.push_str(MAGIC);
    text.push('\n');
    let _ = writeln!(text, "kind {}", model.kind());
    match model {
        TrainedModel::Tree(t) => {
            let _ = writeln!(text, "features {}", t.n_features);
            let _ = writeln!(text, "trees 1");
            push_tree(&mut text, 0, &t.nodes);
        }
        TrainedModel::Forest(f) => {
            let _ = writeln!(text, "features {}", f.n_features);
            let _ = writeln!(text, "trees {}", f.trees.len());
            for (i, tree) in f.trees.iter().enumerate() {
                push_tree(&mut text, i, tree);
            }
        }
        TrainedModel::Gbm(g) => {
            let _ = writeln!(text, "features {}", g.n_features);
            let _ = writeln!(text, "base_score {}", g.base_score);
            let _ = writeln!(text, "learning_rate {}", g.learning_rate);
            let _ = writeln!(text, "trees {}", g.trees.len());
            for (i, tree) in g.trees.iter().enumerate() {
                push_tree(&mut text, i, tree);
            }
        }
        TrainedModel::LogReg(l) => {
            let _ = writeln!(text, "features {}", l.n_features());
            let _ = writeln!(text, "bias {}", l.bias);
            push_vector(&mut text, "weights", &l.weights);
            push_vector(&mut text, "means", &l.means);
            push_vector(&mut text, "stds", &l.stds);
        }
    }
    fs::write(path, text).map_err(|e| CliError::write_io(path, e))
}

fn push_tree(text: &mut String, index: usize, nodes: &[TreeNode]) {
    let _ = writeln!(text, "tree {index} nodes {}", nodes.len());
    for n in nodes {
        if n.leaf {
            let _ = writeln!(text, "leaf {}", n.value);
        } else {
            let _ = writeln!(
                text,
                "split {} {} {} {} {}",
                n.feature, n.threshold, n.left, n.right, n.value
            );
        }
    }
}

fn push_vector(text: &mut String, key: &str, values: &[f64]) {
    text.push_str(key);
    for v in values {
        let _ = write!(text, " {v}");
    }
    text.push('\n');
}

pub fn read_model(path: &Path) -> Result<TrainedModel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::precondition(format!(
            "cannot read model {}: {e} (run train first?)",
            path.display()
        ))
    })?;
    parse_model(&text)
        .map_err(|why| CliError::precondition(format!("{} is not a valid model file: {why}", path.display())))
}

fn parse_model(text: &str) -> Result<TrainedModel, String> {
    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) {
        return Err(format!("missing `{MAGIC}` header"));
    }
    let kind_name = lines
        .next()
        .and_then(|l| l.strip_prefix("kind "))
        .ok_or("missing kind line")?;
    let features: usize = field(lines.next(), "features")?;

    match kind_name {
        "tree" => {
            expect_count(lines.next(), 1)?;
            let nodes = parse_tree(&mut lines, 0, features)?;
            end(lines)?;
            Ok(TrainedModel::Tree(TreeModel {
                nodes,
                n_features: features,
            }))
        }
        "forest" => {
            let count: usize = field(lines.next(), "trees")?;
            if count == 0 {
                return Err(String::from("a forest needs at least one tree"));
            }
            let mut trees = Vec::with_capacity(count);
            for i in 0..count {
                trees.push(parse_tree(&mut lines, i, features)?);
            }
            end(lines)?;
            Ok(TrainedModel::Forest(ForestModel {
                trees,
                n_features: features,
            }))
        }
        "gbm" => {
            let base_score: f64 = field(lines.next(), "base_score")?;
            let learning_rate: f64 = field(lines.next(), "learning_rate")?;
            let count: usize = field(lines.next(), "trees")?;
            let mut trees = Vec::with_capacity(count);
            for i in 0..count {
                trees.push(parse_tree(&mut lines, i, features)?);
            }
            end(lines)?;
            Ok(TrainedModel::Gbm(GbmModel {
                trees,
                base_score,
                learning_rate,
                n_features: features,
            }))
        }
        "logreg" => {
            let bias: f64 = field(lines.next(), "bias")?;
            let weights = parse_vector(lines.next(), "weights", features)?;
            let means = parse_vector(lines.next(), "means", features)?;
            let stds = parse_vector(lines.next(), "stds", features)?;
            end(lines)?;
            Ok(TrainedModel::LogReg(LogRegModel {
                weights,
                bias,
                means,
                stds,
            }))
        }
        other => Err(format!("unknown model kind {other:?}")),
    }
}

fn parse_tree<'a>(
    lines: &mut std::str::Lines<'a>,
    index: usize,
    features: usize,
) -> Result<Vec<TreeNode>, String> {
    let header = lines.next().ok_or("missing tree header")?;
    let expected = format!("tree {index} nodes ");
    let count: usize = header
        .strip_prefix(&expected)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| format!("bad tree header {header:?}"))?;
    if count == 0 {
        return Err(format!("tree {index} has no nodes"));
    }

    let mut nodes = Vec::with_capacity(count);
    for i in 0..count {
        let line = lines.next().ok_or_else(|| format!("tree {index} is truncated"))?;
        let mut tok = line.split(' ');
        let node = match tok.next() {
            Some("leaf") => TreeNode {
                feature: 0,
                threshold: 0.0,
                left: 0,
                right: 0,
                leaf: true,
                value: num(tok.next())?,
            },
            Some("split") => {
                let feature: usize = num(tok.next())?;
                let threshold: f64 = num(tok.next())?;
                let left: usize = num(tok.next())?;
                let right: usize = num(tok.next())?;
                let value: f64 = num(tok.next())?;
                if feature >= features {
                    return Err(format!("node {i} splits feature {feature} of {features}"));
                }
                // Children must point forward into the same tree, which
                // rules out cycles before evaluation ever walks the nodes.
                if left <= i || right <= i || left >= count || right >= count {
                    return Err(format!("node {i} has out-of-order children"));
                }
                TreeNode {
                    feature,
                    threshold,
                    left,
                    right,
                    leaf: false,
                    value,
                }
            }
            _ => return Err(format!("bad node line {line:?}")),
        };
        if tok.next().is_some() {
            return Err(format!("trailing fields on node line {line:?}"));
        }
        nodes.push(node);
    }
    Ok(nodes)
}

fn parse_vector(line: Option<&str>, key: &str, len: usize) -> Result<Vec<f64>, String> {
    let body = line
        .and_then(|l| l.strip_prefix(key))
        .ok_or_else(|| format!("missing `{key}` line"))?;
    let mut out = Vec::with_capacity(len);
    for tok in body.split(' ').filter(|t| !t.is_empty()) {
        out.push(
            tok.parse()
                .map_err(|_| format!("bad number {tok:?} in `{key}`"))?,
        );
    }
    if out.len() != len {
        return Err(format!("`{key}` has {} values, expected {len}", out.len()));
    }
    Ok(out)
}

fn field<T: std::str::FromStr>(line: Option<&str>, key: &str) -> Result<T, String> {
    line.and_then(|l| l.strip_prefix(key))
        .map(str::trim)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| format!("missing or bad `{key}` line"))
}

fn expect_count(line: Option<&str>, want: usize) -> Result<(), String> {
    let got: usize = field(line, "trees")?;
    if got != want {
        return Err(format!("expected {want} trees, file declares {got}"));
    }
    Ok(())
}

fn num<T: std::str::FromStr>(tok: Option<&str>) -> Result<T, String> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| String::from("short or malformed node line"))
}

fn end(mut lines: std::str::Lines<'_>) -> Result<(), String> {
    if lines.next().is_some() {
        return Err(String::from("trailing content after the model body"));
    }
    Ok(())
}
