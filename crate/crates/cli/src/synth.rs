//! Schema-shaped sample data.
//!
//! `generate` writes one UNSW-style and one KDD-style CSV so the whole
//! pipeline can run without the real exports. Rows are drawn from a seeded
//! generative story rather than uniform noise, so the models have something
//! honest to find:
//!
//! * the classes separate only through an interaction: three columns cluster
//!   low or high by the label XOR a hidden mode bit, and three more cluster
//!   by the mode bit itself. No single column separates the classes, but any
//!   one column of each group together do, so ensembles that subsample
//!   features still see a usable copy at most splits. The mode bit is drawn
//!   at 0.25 rather than 0.5, which makes the first split of an interacting
//!   column more attractive to greedy split finding than any one shifted
//!   column;
//! * on rows where two gate columns are both set (about one percent) the
//!   interacting columns go silent: the cluster bit degenerates to a coin,
//!   so that slice of the data stays irreducible for every model;
//! * a dozen columns shift by about a third of their spread with the label,
//!   giving linear models a workable signal that takes many rows to estimate;
//! * 1% of labels are flipped after the features are drawn, capping every
//!   model below perfect and punishing models that chase single rows;
//! * the rest is noise: weighted categories, dotted-quad addresses, ports
//!   (sometimes hexadecimal, sometimes a dash), and the odd empty cell.
//!
//! Interacting and shifted columns sit on positionally aligned column pairs
//! with the same distributions on both sides, so the fused matrix keeps one
//! coherent story per column. Class rates mimic the real exports: mostly
//! benign on the UNSW side, mostly malicious on the KDD side.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use nids_core::data::DatasetSchema;
use nids_core::rng::{derive_seed, Stream};

use crate::error::CliError;

pub const MIN_ROWS: usize = 1000;

pub const UNSW_FILE: &str = "unsw.csv";
pub const KDD_FILE: &str = "kdd.csv";

#[derive(Clone, Copy, Debug)]
pub struct SynthSpec {
    pub rows_per_dataset: usize,
    pub seed: u64,
}

#[derive(Debug)]
pub struct SynthPaths {
    pub unsw: PathBuf,
    pub kdd: PathBuf,
}

/// Writes `unsw.csv` (headerless) and `kdd.csv` (with a header line) into
/// `dir`. The same spec always produces byte-identical files.
pub fn generate(dir: &Path, spec: &SynthSpec) -> Result<SynthPaths, CliError> {
    if spec.rows_per_dataset < MIN_ROWS {
        return Err(CliError::config(format!(
            "rows must be at least {MIN_ROWS}, got {}",
            spec.rows_per_dataset
        )));
    }
    fs::create_dir_all(dir).map_err(|e| CliError::write_io(dir, e))?;

    let unsw = dir.join(UNSW_FILE);
    write_dataset(&unsw, spec, Side::Unsw)?;
    let kdd = dir.join(KDD_FILE);
    write_dataset(&kdd, spec, Side::Kdd)?;
    Ok(SynthPaths { unsw, kdd })
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Unsw,
    Kdd,
}

fn write_dataset(path: &Path, spec: &SynthSpec, side: Side) -> Result<(), CliError> {
    let (schema, tag, malicious_rate) = match side {
        Side::Unsw => (DatasetSchema::unsw(), "synth.unsw", 0.03),
        Side::Kdd => (DatasetSchema::kdd(), "synth.kdd", 0.80),
    };
    let mut stream = Stream::new(derive_seed(spec.seed, tag));

    let file = fs::File::create(path).map_err(|e| CliError::write_io(path, e))?;
    let mut out = BufWriter::new(file);
    let mut emit = |line: &str| {
        out.write_all(line.as_bytes())
            .and_then(|_| out.write_all(b"\n"))
            .map_err(|e| CliError::write_io(path, e))
    };

    if side == Side::Kdd {
        emit(&schema.column_names().join(","))?;
    }
    let mut cells: Vec<String> = Vec::with_capacity(schema.n_columns());
    for _ in 0..spec.rows_per_dataset {
        let sig = draw_signal(&mut stream, malicious_rate);
        let label = sig.y ^ sig.flipped;
        cells.clear();
        for name in schema.column_names() {
            let cell = match side {
                Side::Unsw => unsw_cell(name, &sig, label, &mut stream),
                Side::Kdd => kdd_cell(name, &sig, label, &mut stream),
            };
            debug_assert!(
                !cell.contains([',', '"', '\n']),
                "cell for {name} needs quoting: {cell}"
            );
            cells.push(cell);
        }
        emit(&cells.join(","))?;
    }
    out.flush().map_err(|e| CliError::write_io(path, e))
}

/// Everything label-dependent about one row, drawn before any noise.
struct Signal {
    y: bool,
    flipped: bool,
    /// Interacting columns: each `a` clusters low/high by `y XOR m`, each
    /// `m_val` by `m` alone. Both gates set turns the `a` bit into a coin.
    a: [f64; 3],
    m_val: [f64; 3],
    c_val: f64,
    d_val: f64,
    lin: [f64; 12],
}

/// Probability of the hidden mode bit. At 0.25 the split separating the
/// two clusters of an interacting column leaves 1:3 class mixes behind,
/// a larger impurity drop than any one shifted column offers.
const MODE_RATE: f64 = 0.25;

const LIN_BASE: [f64; 12] = [
    1.0, 200.0, 500.0, 5.0, 10.0, 300.0, 20.0, 0.5, 80.0, 40.0, 150.0, 2.0,
];
const LIN_SIGMA: [f64; 12] = [
    1.0, 120.0, 300.0, 2.0, 6.0, 150.0, 10.0, 0.3, 40.0, 25.0, 90.0, 1.2,
];
const LIN_DELTA: [f64; 12] = [
    0.45, 50.0, 110.0, 0.8, 2.2, 55.0, 3.5, 0.11, 14.0, 8.5, 30.0, 0.42,
];

fn draw_signal(s: &mut Stream, malicious_rate: f64) -> Signal {
    let y = bern(s, malicious_rate);
    let m = bern(s, MODE_RATE);
    let gate_rate = if y { 0.12 } else { 0.08 };
    let c = bern(s, gate_rate);
    let d = bern(s, gate_rate);
    let bit_a = if c && d { bern(s, 0.5) } else { y ^ m };

    let a = [
        cluster(s, bit_a, 60.0, 4.0, 2500.0, 40.0),
        cluster(s, bit_a, 64.0, 6.0, 2200.0, 35.0),
        cluster(s, bit_a, 2.0, 0.5, 70.0, 4.0),
    ];
    let m_val = [
        cluster(s, m, 1.0, 0.2, 3.0, 0.2),
        cluster(s, m, 2.0, 0.4, 9.0, 0.8),
        cluster(s, m, 1.0, 0.3, 6.0, 0.5),
    ];
    let c_val = f64::from(c) + 0.05 * gauss(s);
    let d_val = f64::from(d) + 0.05 * gauss(s);

    let mut lin = [0.0; 12];
    for i in 0..12 {
        let shift = if y { LIN_DELTA[i] } else { 0.0 };
        lin[i] = LIN_BASE[i] + shift + LIN_SIGMA[i] * gauss(s);
    }

    let flipped = bern(s, 0.01);
    Signal {
        y,
        flipped,
        a,
        m_val,
        c_val,
        d_val,
        lin,
    }
}

fn unsw_cell(name: &str, sig: &Signal, label: bool, s: &mut Stream) -> String {
    match name {
        // Interacting columns and gates.
        "dttl" => fmt4(sig.a[0]),
        "dwin" => fmt4(sig.a[1]),
        "ct_dst_src_ltm" => fmt4(sig.a[2]),
        "ct_state_ttl" => fmt4(sig.m_val[0]),
        "dloss" => fmt4(sig.m_val[1]),
        "ct_srv_dst" => fmt4(sig.m_val[2]),
        "Dpkts" => fmt4(sig.c_val),
        "Stime" => fmt4(sig.d_val),
        // Label-shifted columns.
        "Dintpkt" => fmt4(sig.lin[0]),
        "Djit" => fmt4(sig.lin[1]),
        "Dload" => fmt4(sig.lin[2]),
        "Sintpkt" => fmt4(sig.lin[3]),
        "Sjit" => fmt4(sig.lin[4]),
        "Sload" => fmt4(sig.lin[5]),
        "Spkts" => fmt4(sig.lin[6]),
        "ackdat" => fmt4(sig.lin[7]),
        "dmeansz" => fmt4(sig.lin[8]),
        "res_bdy_len" => fmt4(sig.lin[9]),
        "sbytes" => fmt4(sig.lin[10]),
        "dur" => fmt4(sig.lin[11]),
        // Addresses and ports.
        "srcip" => format!("10.40.85.{}", 1 + s.below(30)),
        "dstip" => format!("149.171.126.{}", 1 + s.below(30)),
        "sport" => port(s).to_string(),
        "dsport" => {
            let x = s.unit_f64();
            let p = port(s);
            if x < 0.01 {
                format!("0x{p:04x}")
            } else if x < 0.015 {
                String::from("-")
            } else {
                p.to_string()
            }
        }
        // Categories, unrelated to the label.
        "proto" => pick(
            s,
            &[("tcp", 0.55), ("udp", 0.34), ("icmp", 0.07), ("arp", 0.04)],
        ),
        "state" => pick(
            s,
            &[
                ("FIN", 0.45),
                ("CON", 0.25),
                ("INT", 0.18),
                ("REQ", 0.08),
                ("RST", 0.04),
            ],
        ),
        "service" => pick(
            s,
            &[
                ("-", 0.25),
                ("http", 0.20),
                ("dns", 0.12),
                ("ftp", 0.08),
                ("smtp", 0.08),
                ("ssh", 0.07),
                ("ftp-data", 0.07),
                ("pop3", 0.05),
                ("radius", 0.04),
                ("irc", 0.04),
            ],
        ),
        // Plain noise.
        "sttl" => fmt4(noise(s, 64.0, 10.0)),
        "sloss" => fmt4(noise(s, 3.0, 2.0).abs()),
        "swin" => fmt4(noise(s, 255.0, 4.0)),
        "stcpb" => count_noise(s, 1_000_000.0, 500_000.0),
        "dtcpb" => count_noise(s, 1_000_000.0, 500_000.0),
        "smeansz" => fmt4(noise(s, 90.0, 30.0).abs()),
        "trans_depth" => count_noise(s, 1.0, 1.0),
        "Ltime" => fmt4(noise(s, 1000.0, 100.0)),
        "tcprrt" => fmt4(noise(s, 0.6, 0.3).abs()),
        "synack" => fmt4(noise(s, 0.3, 0.2).abs()),
        "is_sm_ips_ports" => fmt4(clip01(noise(s, 0.1, 0.08))),
        "ct_flw_http_mthd" => count_noise(s, 0.5, 0.8),
        "is_ftp_login" => fmt4(clip01(noise(s, 0.08, 0.08))),
        "ct_ftp_cmd" => {
            if s.unit_f64() < 0.02 {
                String::new()
            } else {
                count_noise(s, 0.4, 0.7)
            }
        }
        "ct_srv_src" => count_noise(s, 3.0, 2.0),
        "ct_dst_ltm" => count_noise(s, 1.5, 1.0),
        "ct_src_ltm" => count_noise(s, 1.5, 1.2),
        "ct_src_dport_ltm" => count_noise(s, 1.2, 1.0),
        "ct_dst_sport_ltm" => count_noise(s, 1.0, 0.8),
        "dbytes" => count_noise(s, 180.0, 60.0),
        // Labels.
        "attack_cat" => {
            if label {
                pick(
                    s,
                    &[
                        ("Generic", 0.35),
                        ("Exploits", 0.25),
                        ("Fuzzers", 0.18),
                        ("DoS", 0.12),
                        ("Reconnaissance", 0.10),
                    ],
                )
            } else {
                String::new()
            }
        }
        "label" => String::from(if label { "1" } else { "0" }),
        other => unreachable!("unhandled unsw column {other}"),
    }
}

fn kdd_cell(name: &str, sig: &Signal, label: bool, s: &mut Stream) -> String {
    match name {
        // Positional partners of the interacting and shifted columns above,
        // drawn from the same distributions.
        "rerror_rate" => fmt4(sig.a[0]),
        "same_srv_rate" => fmt4(sig.a[1]),
        "num_root" => fmt4(sig.a[2]),
        "is_host_login" => fmt4(sig.m_val[0]),
        "count" => fmt4(sig.m_val[1]),
        "num_access_files" => fmt4(sig.m_val[2]),
        "land" => fmt4(sig.c_val),
        "logged_in" => fmt4(sig.d_val),
        "duration" => fmt4(sig.lin[0]),
        "src_bytes" => fmt4(sig.lin[1]),
        "dst_bytes" => fmt4(sig.lin[2]),
        "wrong_fragment" => fmt4(sig.lin[3]),
        "urgent" => fmt4(sig.lin[4]),
        "hot" => fmt4(sig.lin[5]),
        "num_failed_logins" => fmt4(sig.lin[6]),
        "num_compromised" => fmt4(sig.lin[7]),
        "srv_count" => fmt4(sig.lin[8]),
        "dst_host_diff_srv_rate" => fmt4(sig.lin[9]),
        "dst_host_same_src_port_rate" => fmt4(sig.lin[10]),
        "srv_rerror_rate" => fmt4(sig.lin[11]),
        // Categories, unrelated to the label.
        "protocol_type" => pick(s, &[("tcp", 0.60), ("udp", 0.30), ("icmp", 0.10)]),
        "service" => pick(
            s,
            &[
                ("http", 0.25),
                ("private", 0.20),
                ("domain_u", 0.10),
                ("smtp", 0.10),
                ("ftp_data", 0.08),
                ("ftp", 0.07),
                ("telnet", 0.06),
                ("pop_3", 0.05),
                ("ssh", 0.05),
                ("IRC", 0.04),
            ],
        ),
        "flag" => pick(
            s,
            &[("SF", 0.70), ("S0", 0.15), ("REJ", 0.10), ("RSTR", 0.05)],
        ),
        // Plain noise.
        "root_shell" => count_noise(s, 1.5, 1.0),
        "su_attempted" => count_noise(s, 1.0, 0.8),
        "num_file_creations" => count_noise(s, 1.2, 1.0),
        "num_shells" => count_noise(s, 1.5, 1.2),
        "num_outbound_cmds" => count_noise(s, 3.0, 2.0),
        "is_guest_login" => count_noise(s, 180.0, 60.0),
        "serror_rate" => fmt4(clip01(noise(s, 0.05, 0.05))),
        "srv_serror_rate" => fmt4(clip01(noise(s, 0.05, 0.05))),
        "diff_srv_rate" => fmt4(clip01(noise(s, 0.08, 0.08))),
        "srv_diff_host_rate" => fmt4(clip01(noise(s, 0.1, 0.08))),
        "dst_host_count" => count_noise(s, 120.0, 40.0),
        "dst_host_srv_count" => count_noise(s, 100.0, 35.0),
        "dst_host_same_srv_rate" => fmt4(clip01(noise(s, 0.6, 0.2))),
        "dst_host_srv_diff_host_rate" => fmt4(clip01(noise(s, 0.1, 0.06))),
        "dst_host_serror_rate" => fmt4(clip01(noise(s, 0.06, 0.05))),
        "dst_host_srv_serror_rate" => fmt4(clip01(noise(s, 0.06, 0.05))),
        "dst_host_rerror_rate" => fmt4(clip01(noise(s, 0.08, 0.06))),
        "dst_host_srv_rerror_rate" => fmt4(clip01(noise(s, 0.08, 0.06))),
        "label" => {
            if label {
                pick(
                    s,
                    &[
                        ("smurf.", 0.35),
                        ("neptune.", 0.30),
                        ("back.", 0.10),
                        ("satan.", 0.10),
                        ("ipsweep.", 0.08),
                        ("portsweep.", 0.07),
                    ],
                )
            } else {
                String::from("normal.")
            }
        }
        other => unreachable!("unhandled kdd column {other}"),
    }
}

fn bern(s: &mut Stream, p: f64) -> bool {
    s.unit_f64() < p
}

fn gauss(s: &mut Stream) -> f64 {
    let u1 = 1.0 - s.unit_f64();
    let u2 = s.unit_f64();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn noise(s: &mut Stream, mu: f64, sd: f64) -> f64 {
    mu + sd * gauss(s)
}

fn cluster(s: &mut Stream, high: bool, lo: f64, lo_sd: f64, hi: f64, hi_sd: f64) -> f64 {
    if high {
        noise(s, hi, hi_sd)
    } else {
        noise(s, lo, lo_sd)
    }
}

fn clip01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

fn fmt4(x: f64) -> String {
    format!("{x:.4}")
}

/// Non-negative integer-valued noise cell.
fn count_noise(s: &mut Stream, mu: f64, sd: f64) -> String {
    format!("{}", noise(s, mu, sd).abs().round() as u64)
}

const PORTS: [u16; 12] = [20, 21, 22, 23, 25, 53, 80, 88, 110, 111, 123, 143];

fn port(s: &mut Stream) -> u16 {
    PORTS[s.below(PORTS.len())]
}

fn pick(s: &mut Stream, options: &[(&str, f64)]) -> String {
    let x = s.unit_f64();
    let mut acc = 0.0;
    for (name, w) in options {
        acc += w;
        if x < acc {
            return String::from(*name);
        }
    }
    String::from(options[options.len() - 1].0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nids_core::data::{class_counts, extract_labels, DatasetKind};
    use nids_core::preprocess::{encode, select_features, FeatureMap};

    use crate::ingest::read_table;

    fn spec(rows: usize, seed: u64) -> SynthSpec {
        SynthSpec {
            rows_per_dataset: rows,
            seed,
        }
    }

    #[test]
    fn too_few_rows_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let err = generate(dir.path(), &spec(10, 0)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn same_seed_same_bytes_different_seed_different_bytes() {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        let d3 = tempfile::tempdir().unwrap();
        generate(d1.path(), &spec(1000, 7)).unwrap();
        generate(d2.path(), &spec(1000, 7)).unwrap();
        generate(d3.path(), &spec(1000, 8)).unwrap();
        for file in [UNSW_FILE, KDD_FILE] {
            let a = fs::read(d1.path().join(file)).unwrap();
            let b = fs::read(d2.path().join(file)).unwrap();
            let c = fs::read(d3.path().join(file)).unwrap();
            assert_eq!(a, b, "{file} not reproducible");
            assert_ne!(a, c, "{file} ignores the seed");
        }
    }

    #[test]
    fn generated_files_flow_through_encode_and_select() {
        let dir = tempfile::tempdir().unwrap();
        let paths = generate(dir.path(), &spec(1500, 3)).unwrap();
        let map = FeatureMap::builtin();

        let unsw = read_table(&paths.unsw, DatasetKind::Unsw, false).unwrap();
        assert_eq!(unsw.n_rows(), 1500);
        let (_, m) = encode(&unsw).unwrap();
        let selected = select_features(&m, &map, DatasetKind::Unsw).unwrap();
        assert_eq!(selected.n_features(), 48);

        let kdd = read_table(&paths.kdd, DatasetKind::Kdd, true).unwrap();
        assert_eq!(kdd.n_rows(), 1500);
        let (_, m) = encode(&kdd).unwrap();
        let selected = select_features(&m, &map, DatasetKind::Kdd).unwrap();
        assert_eq!(selected.n_features(), 48);
    }

    #[test]
    fn class_rates_sit_near_their_targets() {
        let dir = tempfile::tempdir().unwrap();
        let paths = generate(dir.path(), &spec(4000, 5)).unwrap();

        let unsw = read_table(&paths.unsw, DatasetKind::Unsw, false).unwrap();
        let (_, malicious) = class_counts(&extract_labels(&unsw).unwrap());
        let rate = malicious as f64 / 4000.0;
        assert!((0.015..0.06).contains(&rate), "unsw malicious rate {rate}");

        let kdd = read_table(&paths.kdd, DatasetKind::Kdd, true).unwrap();
        let (_, malicious) = class_counts(&extract_labels(&kdd).unwrap());
        let rate = malicious as f64 / 4000.0;
        assert!((0.75..0.85).contains(&rate), "kdd malicious rate {rate}");
    }

    #[test]
    fn messy_cells_show_up() {
        let dir = tempfile::tempdir().unwrap();
        let paths = generate(dir.path(), &spec(4000, 1)).unwrap();
        let text = fs::read_to_string(&paths.unsw).unwrap();
        assert!(text.contains(",0x00"), "no hex ports in the sample");
        assert!(text.contains(",-,"), "no dash cells in the sample");
    }
}
