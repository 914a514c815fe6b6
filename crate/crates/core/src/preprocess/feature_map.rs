//! Positional pairing of the 48 retained features across the two layouts.
//!
//! Fused column `i` is fed by `pairs[i].0` for UNSW rows and `pairs[i].1`
//! for KDD rows. One-hot names use the encoder's normalized spellings
//! (`service_ftp_data`, `service_pop_3`, ...), so selection works directly
//! on encoder output.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::data::DatasetKind;

/// Width of the fused feature space.
pub const FUSED_WIDTH: usize = 48;

const PAIRS: [(&str, &str); FUSED_WIDTH] = [
    ("Dintpkt", "duration"),
    ("Djit", "src_bytes"),
    ("Dload", "dst_bytes"),
    ("Dpkts", "land"),
    ("Sintpkt", "wrong_fragment"),
    ("Sjit", "urgent"),
    ("Sload", "hot"),
    ("Spkts", "num_failed_logins"),
    ("Stime", "logged_in"),
    ("ackdat", "num_compromised"),
    ("ct_dst_ltm", "root_shell"),
    ("ct_dst_sport_ltm", "su_attempted"),
    ("ct_dst_src_ltm", "num_root"),
    ("ct_src_dport_ltm", "num_file_creations"),
    ("ct_src_ltm", "num_shells"),
    ("ct_srv_dst", "num_access_files"),
    ("ct_srv_src", "num_outbound_cmds"),
    ("ct_state_ttl", "is_host_login"),
    ("dbytes", "is_guest_login"),
    ("dloss", "count"),
    ("dmeansz", "srv_count"),
    ("dsport", "serror_rate"),
    ("dstip", "srv_serror_rate"),
    ("dttl", "rerror_rate"),
    ("dur", "srv_rerror_rate"),
    ("dwin", "same_srv_rate"),
    ("is_ftp_login", "diff_srv_rate"),
    ("is_sm_ips_ports", "srv_diff_host_rate"),
    ("proto_icmp", "dst_host_count"),
    ("proto_tcp", "dst_host_srv_count"),
    ("proto_udp", "dst_host_same_srv_rate"),
    ("res_bdy_len", "dst_host_diff_srv_rate"),
    ("sbytes", "dst_host_same_src_port_rate"),
    ("service_ftp", "dst_host_srv_diff_host_rate"),
    ("service_ftp_data", "dst_host_serror_rate"),
    ("service_http", "dst_host_srv_serror_rate"),
    ("service_irc", "dst_host_rerror_rate"),
    ("service_pop3", "dst_host_srv_rerror_rate"),
    ("service_smtp", "protocol_type_icmp"),
    ("service_ssh", "protocol_type_tcp"),
    ("sloss", "protocol_type_udp"),
    ("smeansz", "service_IRC"),
    ("sport", "service_ftp"),
    ("srcip", "service_ftp_data"),
    ("sttl", "service_http"),
    ("swin", "service_pop_3"),
    ("synack", "service_smtp"),
    ("tcprrt", "service_ssh"),
];

/// Ordered feature pairs `(unsw_name, kdd_name)` defining the fused layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureMap {
    pairs: Vec<(String, String)>,
}

impl FeatureMap {
    /// The built-in 48-pair alignment.
    pub fn builtin() -> FeatureMap {
        let map = FeatureMap {
            pairs: PAIRS
                .iter()
                .map(|(u, k)| (u.to_string(), k.to_string()))
                .collect(),
        };
        debug_assert!(map.validate().is_ok());
        map
    }

    /// Builds a custom alignment; must hold exactly [`FUSED_WIDTH`] pairs
    /// with no duplicate name on either side.
    pub fn new(pairs: Vec<(String, String)>) -> Result<FeatureMap, FeatureMapError> {
        let map = FeatureMap { pairs };
        map.validate()?;
        Ok(map)
    }

    fn validate(&self) -> Result<(), FeatureMapError> {
        if self.pairs.len() != FUSED_WIDTH {
            return Err(FeatureMapError::PairCount {
                expected: FUSED_WIDTH,
                actual: self.pairs.len(),
            });
        }
        for side in [DatasetKind::Unsw, DatasetKind::Kdd] {
            for i in 0..self.pairs.len() {
                for j in 0..i {
                    if self.name(side, i) == self.name(side, j) {
                        return Err(FeatureMapError::DuplicateName {
                            side,
                            name: self.name(side, i).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    /// Source column name feeding fused index `i` from the given side.
    pub fn name(&self, side: DatasetKind, i: usize) -> &str {
        match side {
            DatasetKind::Unsw => &self.pairs[i].0,
            DatasetKind::Kdd => &self.pairs[i].1,
        }
    }

    /// Positional name of fused column `i` (`f00`, `f01`, ...).
    pub fn fused_name(i: usize) -> String {
        alloc::format!("f{i:02}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeatureMapError {
    PairCount { expected: usize, actual: usize },
    DuplicateName { side: DatasetKind, name: String },
}

impl fmt::Display for FeatureMapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureMapError::PairCount { expected, actual } => {
                write!(f, "feature map must hold {expected} pairs, got {actual}")
            }
            FeatureMapError::DuplicateName { side, name } => {
                write!(f, "duplicate {side} feature name {name:?} in map")
            }
        }
    }
}

impl core::error::Error for FeatureMapError {}
