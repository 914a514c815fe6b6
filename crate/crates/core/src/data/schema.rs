use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Which of the two supported dataset families a table belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DatasetKind {
    Unsw,
    Kdd,
}

impl DatasetKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DatasetKind::Unsw => "unsw",
            DatasetKind::Kdd => "kdd",
        }
    }

    /// Converts one raw label cell to the binary target.
    ///
    /// UNSW label cells must already be `0`/`1`. KDD labels are attack names
    /// with a trailing period; `normal.` (case-insensitive, after trimming)
    /// is benign, anything else is malicious.
    pub fn parse_label(self, cell: &str, row: usize) -> Result<u8, LabelError> {
        let t = cell.trim();
        match self {
            DatasetKind::Unsw => match t {
                "0" => Ok(0),
                "1" => Ok(1),
                _ => Err(LabelError::UnswNotBinary {
                    row,
                    cell: t.to_string(),
                }),
            },
            DatasetKind::Kdd => {
                if t.is_empty() {
                    Err(LabelError::KddEmpty { row })
                } else if t.eq_ignore_ascii_case("normal.") {
                    Ok(0)
                } else {
                    Ok(1)
                }
            }
        }
    }
}

impl fmt::Display for DatasetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How a raw column is turned into numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnRole {
    /// Plain real value; dash, empty, and unparsable cells become 0.0.
    Numeric,
    /// Expanded into one indicator column per seen category.
    OneHot,
    /// Dense integer code per category; 0 reserved for dash/empty/unseen.
    Ordinal,
    /// Dotted-quad IPv4 address encoded as its 32-bit integer value.
    IpAddr,
    /// Integer port number; `0x`-prefixed hexadecimal accepted.
    Port,
    /// The class label; never part of the feature matrix.
    Label,
}

/// Column layout of one dataset file.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetSchema {
    kind: DatasetKind,
    column_names: Vec<String>,
    roles: Vec<ColumnRole>,
    label_column: usize,
}

/// Column counts the two layouts must have: UNSW ships 47 features plus the
/// attack category and binary label; KDD ships 41 features plus the label.
pub const UNSW_COLUMNS: usize = 49;
pub const KDD_COLUMNS: usize = 42;

const UNSW_LAYOUT: [(&str, ColumnRole); UNSW_COLUMNS] = [
    ("srcip", ColumnRole::IpAddr),
    ("sport", ColumnRole::Port),
    ("dstip", ColumnRole::IpAddr),
    ("dsport", ColumnRole::Port),
    ("proto", ColumnRole::OneHot),
    ("state", ColumnRole::OneHot),
    ("dur", ColumnRole::Numeric),
    ("sbytes", ColumnRole::Numeric),
    ("dbytes", ColumnRole::Numeric),
    ("sttl", ColumnRole::Numeric),
    ("dttl", ColumnRole::Numeric),
    ("sloss", ColumnRole::Numeric),
    ("dloss", ColumnRole::Numeric),
    ("service", ColumnRole::OneHot),
    ("Sload", ColumnRole::Numeric),
    ("Dload", ColumnRole::Numeric),
    ("Spkts", ColumnRole::Numeric),
    ("Dpkts", ColumnRole::Numeric),
    ("swin", ColumnRole::Numeric),
    ("dwin", ColumnRole::Numeric),
    ("stcpb", ColumnRole::Numeric),
    ("dtcpb", ColumnRole::Numeric),
    ("smeansz", ColumnRole::Numeric),
    ("dmeansz", ColumnRole::Numeric),
    ("trans_depth", ColumnRole::Numeric),
    ("res_bdy_len", ColumnRole::Numeric),
    ("Sjit", ColumnRole::Numeric),
    ("Djit", ColumnRole::Numeric),
    ("Stime", ColumnRole::Numeric),
    ("Ltime", ColumnRole::Numeric),
    ("Sintpkt", ColumnRole::Numeric),
    ("Dintpkt", ColumnRole::Numeric),
    ("tcprrt", ColumnRole::Numeric),
    ("synack", ColumnRole::Numeric),
    ("ackdat", ColumnRole::Numeric),
    ("is_sm_ips_ports", ColumnRole::Numeric),
    ("ct_state_ttl", ColumnRole::Numeric),
    ("ct_flw_http_mthd", ColumnRole::Numeric),
    ("is_ftp_login", ColumnRole::Numeric),
    ("ct_ftp_cmd", ColumnRole::Numeric),
    ("ct_srv_src", ColumnRole::Numeric),
    ("ct_srv_dst", ColumnRole::Numeric),
    ("ct_dst_ltm", ColumnRole::Numeric),
    ("ct_src_ltm", ColumnRole::Numeric),
    ("ct_src_dport_ltm", ColumnRole::Numeric),
    ("ct_dst_sport_ltm", ColumnRole::Numeric),
    ("ct_dst_src_ltm", ColumnRole::Numeric),
    // Multiclass attack category: kept in the table, ordinal-encoded, and
    // dropped by feature selection; the task is binary.
    ("attack_cat", ColumnRole::Ordinal),
    ("label", ColumnRole::Label),
];

const KDD_LAYOUT: [(&str, ColumnRole); KDD_COLUMNS] = [
    ("duration", ColumnRole::Numeric),
    ("protocol_type", ColumnRole::OneHot),
    ("service", ColumnRole::OneHot),
    ("flag", ColumnRole::OneHot),
    ("src_bytes", ColumnRole::Numeric),
    ("dst_bytes", ColumnRole::Numeric),
    ("land", ColumnRole::Numeric),
    ("wrong_fragment", ColumnRole::Numeric),
    ("urgent", ColumnRole::Numeric),
    ("hot", ColumnRole::Numeric),
    ("num_failed_logins", ColumnRole::Numeric),
    ("logged_in", ColumnRole::Numeric),
    ("num_compromised", ColumnRole::Numeric),
    ("root_shell", ColumnRole::Numeric),
    ("su_attempted", ColumnRole::Numeric),
    ("num_root", ColumnRole::Numeric),
    ("num_file_creations", ColumnRole::Numeric),
    ("num_shells", ColumnRole::Numeric),
    ("num_access_files", ColumnRole::Numeric),
    ("num_outbound_cmds", ColumnRole::Numeric),
    ("is_host_login", ColumnRole::Numeric),
    ("is_guest_login", ColumnRole::Numeric),
    ("count", ColumnRole::Numeric),
    ("srv_count", ColumnRole::Numeric),
    ("serror_rate", ColumnRole::Numeric),
    ("srv_serror_rate", ColumnRole::Numeric),
    ("rerror_rate", ColumnRole::Numeric),
    ("srv_rerror_rate", ColumnRole::Numeric),
    ("same_srv_rate", ColumnRole::Numeric),
    ("diff_srv_rate", ColumnRole::Numeric),
    ("srv_diff_host_rate", ColumnRole::Numeric),
    ("dst_host_count", ColumnRole::Numeric),
    ("dst_host_srv_count", ColumnRole::Numeric),
    ("dst_host_same_srv_rate", ColumnRole::Numeric),
    ("dst_host_diff_srv_rate", ColumnRole::Numeric),
    ("dst_host_same_src_port_rate", ColumnRole::Numeric),
    ("dst_host_srv_diff_host_rate", ColumnRole::Numeric),
    ("dst_host_serror_rate", ColumnRole::Numeric),
    ("dst_host_srv_serror_rate", ColumnRole::Numeric),
    ("dst_host_rerror_rate", ColumnRole::Numeric),
    ("dst_host_srv_rerror_rate", ColumnRole::Numeric),
    ("label", ColumnRole::Label),
];

impl DatasetSchema {
    /// Built-in UNSW-NB15 layout: 49 columns, headerless files by default.
    pub fn unsw() -> Self {
        Self::from_layout(DatasetKind::Unsw, &UNSW_LAYOUT)
    }

    /// Built-in KDD-Cup-99 layout: 41 features plus the trailing label.
    pub fn kdd() -> Self {
        Self::from_layout(DatasetKind::Kdd, &KDD_LAYOUT)
    }

    fn from_layout(kind: DatasetKind, layout: &[(&str, ColumnRole)]) -> Self {
        let schema = DatasetSchema {
            kind,
            column_names: layout.iter().map(|(n, _)| (*n).to_string()).collect(),
            roles: layout.iter().map(|(_, r)| *r).collect(),
            label_column: layout.len() - 1,
        };
        debug_assert!(schema.validate().is_ok());
        schema
    }

    /// Builds a custom layout (schema override files); validated on entry.
    pub fn new(
        kind: DatasetKind,
        column_names: Vec<String>,
        roles: Vec<ColumnRole>,
        label_column: usize,
    ) -> Result<Self, SchemaError> {
        let schema = DatasetSchema {
            kind,
            column_names,
            roles,
            label_column,
        };
        schema.validate()?;
        Ok(schema)
    }

    fn validate(&self) -> Result<(), SchemaError> {
        let expected = match self.kind {
            DatasetKind::Unsw => UNSW_COLUMNS,
            DatasetKind::Kdd => KDD_COLUMNS,
        };
        if self.column_names.len() != expected {
            return Err(SchemaError::ColumnCount {
                kind: self.kind,
                expected,
                actual: self.column_names.len(),
            });
        }
        if self.roles.len() != self.column_names.len() {
            return Err(SchemaError::RoleCount {
                roles: self.roles.len(),
                columns: self.column_names.len(),
            });
        }
        for (i, name) in self.column_names.iter().enumerate() {
            if name.is_empty() {
                return Err(SchemaError::EmptyName { column: i });
            }
            if self.column_names[..i].contains(name) {
                return Err(SchemaError::DuplicateName { name: name.clone() });
            }
        }
        let labels = self
            .roles
            .iter()
            .filter(|r| **r == ColumnRole::Label)
            .count();
        if labels != 1 {
            return Err(SchemaError::LabelCount { found: labels });
        }
        if self.label_column >= self.roles.len()
            || self.roles[self.label_column] != ColumnRole::Label
        {
            return Err(SchemaError::LabelColumn {
                column: self.label_column,
            });
        }
        Ok(())
    }

    pub fn kind(&self) -> DatasetKind {
        self.kind
    }

    pub fn n_columns(&self) -> usize {
        self.column_names.len()
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn roles(&self) -> &[ColumnRole] {
        &self.roles
    }

    pub fn label_column(&self) -> usize {
        self.label_column
    }

    /// Indices of the categorical columns (one-hot plus ordinal).
    pub fn categorical_columns(&self) -> Vec<usize> {
        self.roles
            .iter()
            .enumerate()
            .filter(|(_, r)| matches!(r, ColumnRole::OneHot | ColumnRole::Ordinal))
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemaError {
    ColumnCount {
        kind: DatasetKind,
        expected: usize,
        actual: usize,
    },
    RoleCount {
        roles: usize,
        columns: usize,
    },
    EmptyName {
        column: usize,
    },
    DuplicateName {
        name: String,
    },
    LabelCount {
        found: usize,
    },
    LabelColumn {
        column: usize,
    },
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaError::ColumnCount {
                kind,
                expected,
                actual,
            } => write!(
                f,
                "{kind} schema must have {expected} columns, got {actual}"
            ),
            SchemaError::RoleCount { roles, columns } => {
                write!(f, "{roles} column roles for {columns} columns")
            }
            SchemaError::EmptyName { column } => write!(f, "column {column} has an empty name"),
            SchemaError::DuplicateName { name } => write!(f, "duplicate column name {name:?}"),
            SchemaError::LabelCount { found } => {
                write!(f, "schema must have exactly one label column, found {found}")
            }
            SchemaError::LabelColumn { column } => {
                write!(f, "label_column {column} does not point at a Label role")
            }
        }
    }
}

impl core::error::Error for SchemaError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LabelError {
    EmptyTable,
    UnswNotBinary { row: usize, cell: String },
    KddEmpty { row: usize },
}

impl fmt::Display for LabelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelError::EmptyTable => write!(f, "cannot extract labels from an empty table"),
            LabelError::UnswNotBinary { row, cell } => write!(
                f,
                "row {row}: UNSW label cell must be \"0\" or \"1\", got {cell:?}"
            ),
            LabelError::KddEmpty { row } => write!(f, "row {row}: empty KDD label cell"),
        }
    }
}

impl core::error::Error for LabelError {}
