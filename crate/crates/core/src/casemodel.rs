//! Network case parsing, validation, and bus admittance assembly.
//!
//! Two input formats are supported: the MATPOWER `.m` matrix subset
//! (`baseMVA`, `bus`, `gen`, `branch`) and a native JSON schema that adds
//! a `converters` block for per-bus operating modes and current limits,
//! which the MATPOWER format cannot express. All stored quantities are
//! per-unit on the case base power.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

use crate::numerics::ComplexMatrix;

#[derive(Debug, Error)]
pub enum CaseError {
    #[error("syntax error at line {line}: {message} (near '{token}')")]
    Syntax {
        line: usize,
        message: String,
        token: String,
    },
    #[error("semantic error: {0}")]
    Semantic(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BusRole {
    Slack,
    PQ,
    PV,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConverterMode {
    GridFollowingPq,
    GridFormingPv,
}

/// One bus row: loads are net consumption in per-unit, shunts are
/// admittance to ground.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BusRecord {
    pub id: usize,
    pub role: BusRole,
    pub p_load: f64,
    pub q_load: f64,
    pub v_set: f64,
    pub shunt_g: f64,
    pub shunt_b: f64,
}

/// Pi-model branch; `tap_ratio` 1.0 and `phase_shift` 0.0 for plain lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchRecord {
    pub from: usize,
    pub to: usize,
    pub r: f64,
    pub x: f64,
    pub b_charging: f64,
    pub tap_ratio: f64,
    pub phase_shift: f64,
    pub status: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenRecord {
    pub bus: usize,
    pub p_set: f64,
    pub q_set: f64,
    pub v_set: f64,
    /// Converter current-magnitude limit; `None` means unbounded.
    pub i_max: Option<f64>,
    pub mode_hint: ConverterMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkCase {
    pub name: String,
    pub base_power: f64,
    pub buses: Vec<BusRecord>,
    pub branches: Vec<BranchRecord>,
    pub generators: Vec<GenRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseFormat {
    MatpowerM,
    NativeJson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleTarget {
    LoadsOnly,
    /// Loads plus generator active setpoints at non-slack buses.
    LoadsAndIbrInjections,
}

/// Dense bus admittance matrix with its bus-id bookkeeping.
#[derive(Debug, Clone)]
pub struct AdmittanceMatrix {
    pub order: usize,
    pub entries: ComplexMatrix,
    /// bus id -> row index, a bijection onto 0..order-1
    pub index_map: BTreeMap<usize, usize>,
}

impl NetworkCase {
    /// Case-level invariants: one slack, consistent branch endpoints,
    /// positive base power, positive voltage targets.
    pub fn validate(&self) -> Result<(), CaseError> {
        if self.base_power <= 0.0 {
            return Err(CaseError::Semantic(format!(
                "base power must be positive, got {}",
                self.base_power
            )));
        }
        let mut seen = BTreeSet::new();
        for b in &self.buses {
            if !seen.insert(b.id) {
                return Err(CaseError::Semantic(format!("duplicate bus id {}", b.id)));
            }
            if matches!(b.role, BusRole::Slack | BusRole::PV) && b.v_set <= 0.0 {
                return Err(CaseError::Semantic(format!(
                    "bus {} is voltage-controlled but v_set = {}",
                    b.id, b.v_set
                )));
            }
        }
        let slack_count = self
            .buses
            .iter()
            .filter(|b| b.role == BusRole::Slack)
            .count();
        if slack_count != 1 {
            return Err(CaseError::Semantic(format!(
                "expected exactly one slack bus, found {slack_count}"
            )));
        }
        for br in &self.branches {
            if !seen.contains(&br.from) || !seen.contains(&br.to) {
                return Err(CaseError::Semantic(format!(
                    "dangling branch {}-{}: endpoint not in bus table",
                    br.from, br.to
                )));
            }
            if br.status && br.r == 0.0 && br.x == 0.0 {
                return Err(CaseError::Semantic(format!(
                    "zero-impedance branch {}-{}",
                    br.from, br.to
                )));
            }
        }
        for g in &self.generators {
            if !seen.contains(&g.bus) {
                return Err(CaseError::Semantic(format!(
                    "generator at unknown bus {}",
                    g.bus
                )));
            }
            if let Some(imax) = g.i_max {
                if imax <= 0.0 {
                    return Err(CaseError::Semantic(format!(
                        "generator at bus {} has non-positive i_max {}",
                        g.bus, imax
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn slack_bus(&self) -> &BusRecord {
        self.buses
            .iter()
            .find(|b| b.role == BusRole::Slack)
            .expect("validated case has a slack bus")
    }

    pub fn bus(&self, id: usize) -> Option<&BusRecord> {
        self.buses.iter().find(|b| b.id == id)
    }

    /// Net scheduled complex power injection per bus: generation minus load.
    pub fn injections(&self) -> BTreeMap<usize, Complex64> {
        let mut inj: BTreeMap<usize, Complex64> = BTreeMap::new();
        for b in &self.buses {
            inj.insert(b.id, Complex64::new(-b.p_load, -b.q_load));
        }
        for g in &self.generators {
            *inj.get_mut(&g.bus).expect("validated") += Complex64::new(g.p_set, g.q_set);
        }
        inj
    }
}

/// Parse a case file in the declared format and validate it.
pub fn parse_case(text: &str, format: CaseFormat) -> Result<NetworkCase, CaseError> {
    let case = match format {
        CaseFormat::MatpowerM => matpower::parse(text)?,
        CaseFormat::NativeJson => json::parse(text)?,
    };
    case.validate()?;
    Ok(case)
}

/// Serialize to the native JSON schema.
pub fn serialize_case(case: &NetworkCase) -> String {
    json::serialize(case)
}

/// Assemble the dense bus admittance matrix from the pi-model branches
/// and bus shunts. Out-of-service branches are skipped.
pub fn build_ybus(case: &NetworkCase) -> AdmittanceMatrix {
    let index_map: BTreeMap<usize, usize> = case
        .buses
        .iter()
        .enumerate()
        .map(|(i, b)| (b.id, i))
        .collect();
    let n = case.buses.len();
    let mut y = ComplexMatrix::zeros(n, n);

    for br in &case.branches {
        if !br.status {
            continue;
        }
        let i = index_map[&br.from];
        let j = index_map[&br.to];
        let ys = Complex64::new(1.0, 0.0) / Complex64::new(br.r, br.x);
        let bc = Complex64::new(0.0, br.b_charging / 2.0);
        let tap = Complex64::from_polar(br.tap_ratio, br.phase_shift);
        let tap_sq = br.tap_ratio * br.tap_ratio;
        // from side sits behind the tap
        y[(i, i)] += (ys + bc) / tap_sq;
        y[(j, j)] += ys + bc;
        y[(i, j)] -= ys / tap.conj();
        y[(j, i)] -= ys / tap;
    }
    for b in &case.buses {
        let i = index_map[&b.id];
        y[(i, i)] += Complex64::new(b.shunt_g, b.shunt_b);
    }

    AdmittanceMatrix {
        order: n,
        entries: y,
        index_map,
    }
}

/// Return a copy of the case with the selected injections scaled by
/// `lambda`. The original case is untouched.
pub fn scale_loading(case: &NetworkCase, lambda: f64, targets: ScaleTarget) -> NetworkCase {
    assert!(lambda >= 0.0, "loading scale must be non-negative");
    let mut scaled = case.clone();
    for b in &mut scaled.buses {
        b.p_load *= lambda;
        b.q_load *= lambda;
    }
    if targets == ScaleTarget::LoadsAndIbrInjections {
        let slack_id = case.slack_bus().id;
        for g in &mut scaled.generators {
            if g.bus != slack_id {
                g.p_set *= lambda;
            }
        }
    }
    scaled
}

mod matpower {
    //! MATPOWER `.m` subset: `mpc.baseMVA`, `mpc.bus`, `mpc.gen`,
    //! `mpc.branch`. Any other assignment is skipped; quantities are
    //! converted to per-unit on baseMVA.

    use super::*;

    pub fn parse(text: &str) -> Result<NetworkCase, CaseError> {
        let mut name = String::from("matpower_case");
        let mut base_mva: Option<f64> = None;
        let mut bus_rows: Vec<Vec<f64>> = Vec::new();
        let mut gen_rows: Vec<Vec<f64>> = Vec::new();
        let mut branch_rows: Vec<Vec<f64>> = Vec::new();

        let mut lines = text.lines().enumerate().peekable();
        while let Some((lineno, raw)) = lines.next() {
            let line = strip_comment(raw).trim().to_string();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("function") {
                if let Some(eq) = rest.find('=') {
                    name = rest[eq + 1..].trim().to_string();
                }
                continue;
            }
            if let Some(rest) = assignment_rhs(&line, "mpc.baseMVA") {
                let tok = rest.trim_end_matches(';').trim();
                base_mva = Some(tok.parse::<f64>().map_err(|_| CaseError::Syntax {
                    line: lineno + 1,
                    message: "invalid baseMVA".into(),
                    token: tok.into(),
                })?);
                continue;
            }
            let target = if line.starts_with("mpc.bus") && !line.starts_with("mpc.bus_name") {
                Some(Table::Bus)
            } else if line.starts_with("mpc.gen") && !line.starts_with("mpc.gencost") {
                Some(Table::Gen)
            } else if line.starts_with("mpc.branch") {
                Some(Table::Branch)
            } else {
                None
            };
            if let Some(table) = target {
                let key = match table {
                    Table::Bus => "mpc.bus",
                    Table::Gen => "mpc.gen",
                    Table::Branch => "mpc.branch",
                };
                let Some(rest) = assignment_rhs(&line, key) else {
                    continue;
                };
                let mut body = String::from(rest);
                // The matrix may span multiple lines up to "];".
                while !body.contains(']') {
                    match lines.next() {
                        Some((_, next)) => {
                            body.push('\n');
                            body.push_str(strip_comment(next));
                        }
                        None => {
                            return Err(CaseError::Syntax {
                                line: lineno + 1,
                                message: format!("unterminated matrix for {key}"),
                                token: "[".into(),
                            })
                        }
                    }
                }
                let rows = parse_matrix(&body, lineno + 1)?;
                match table {
                    Table::Bus => bus_rows.extend(rows),
                    Table::Gen => gen_rows.extend(rows),
                    Table::Branch => branch_rows.extend(rows),
                }
            }
        }

        let base_mva = base_mva.ok_or_else(|| CaseError::Semantic("missing baseMVA".into()))?;

        let mut buses = Vec::new();
        for (k, row) in bus_rows.iter().enumerate() {
            if row.len() < 13 {
                return Err(CaseError::Syntax {
                    line: 0,
                    message: format!("bus row {k} has {} columns, expected >= 13", row.len()),
                    token: String::new(),
                });
            }
            let role = match row[1] as i64 {
                1 => BusRole::PQ,
                2 => BusRole::PV,
                3 => BusRole::Slack,
                other => {
                    return Err(CaseError::Semantic(format!(
                        "bus {} has unsupported type {other}",
                        row[0]
                    )))
                }
            };
            buses.push(BusRecord {
                id: row[0] as usize,
                role,
                p_load: row[2] / base_mva,
                q_load: row[3] / base_mva,
                v_set: row[7],
                shunt_g: row[4] / base_mva,
                shunt_b: row[5] / base_mva,
            });
        }

        let mut generators = Vec::new();
        for row in &gen_rows {
            if row.len() < 6 {
                return Err(CaseError::Syntax {
                    line: 0,
                    message: "gen row too short".into(),
                    token: String::new(),
                });
            }
            generators.push(GenRecord {
                bus: row[0] as usize,
                p_set: row[1] / base_mva,
                q_set: row[2] / base_mva,
                v_set: row[5],
                i_max: None,
                mode_hint: ConverterMode::GridFormingPv,
            });
        }

        let mut branches = Vec::new();
        for row in &branch_rows {
            if row.len() < 11 {
                return Err(CaseError::Syntax {
                    line: 0,
                    message: "branch row too short".into(),
                    token: String::new(),
                });
            }
            let tap = if row[8] == 0.0 { 1.0 } else { row[8] };
            branches.push(BranchRecord {
                from: row[0] as usize,
                to: row[1] as usize,
                r: row[2],
                x: row[3],
                b_charging: row[4],
                tap_ratio: tap,
                phase_shift: row[9].to_radians(),
                status: row[10] != 0.0,
            });
        }

        // PV setpoints come from the gen table when present.
        for g in &generators {
            if let Some(b) = buses.iter_mut().find(|b| b.id == g.bus) {
                if b.role != BusRole::PQ && g.v_set > 0.0 {
                    b.v_set = g.v_set;
                }
            }
        }

        Ok(NetworkCase {
            name,
            base_power: base_mva,
            buses,
            branches,
            generators,
        })
    }

    enum Table {
        Bus,
        Gen,
        Branch,
    }

    fn strip_comment(line: &str) -> &str {
        match line.find('%') {
            Some(k) => &line[..k],
            None => line,
        }
    }

    fn assignment_rhs<'a>(line: &'a str, key: &str) -> Option<&'a str> {
        let rest = line.strip_prefix(key)?.trim_start();
        let rest = rest.strip_prefix('=')?;
        Some(rest.trim_start().strip_prefix('[').unwrap_or(rest))
    }

    fn parse_matrix(body: &str, start_line: usize) -> Result<Vec<Vec<f64>>, CaseError> {
        let body = body.replace('[', " ");
        let body = match body.find(']') {
            Some(k) => &body[..k],
            None => &body,
        };
        let mut rows = Vec::new();
        for chunk in body.split(';') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let mut row = Vec::new();
            for tok in chunk.split_whitespace() {
                row.push(tok.parse::<f64>().map_err(|_| CaseError::Syntax {
                    line: start_line,
                    message: "invalid numeric token in matrix".into(),
                    token: tok.into(),
                })?);
            }
            rows.push(row);
        }
        Ok(rows)
    }
}

mod json {
    //! Native JSON case schema:
    //! `{name, base_mva, buses:[...], branches:[...], generators:[...],
    //!   converters:[{bus, mode, i_max, v_set}]}`.

    use super::*;

    #[derive(Serialize, Deserialize)]
    struct JsonCase {
        name: String,
        base_mva: f64,
        buses: Vec<JsonBus>,
        branches: Vec<JsonBranch>,
        #[serde(default)]
        generators: Vec<JsonGen>,
        #[serde(default)]
        converters: Vec<JsonConverter>,
    }

    #[derive(Serialize, Deserialize)]
    struct JsonBus {
        id: usize,
        role: BusRole,
        #[serde(default)]
        p_load: f64,
        #[serde(default)]
        q_load: f64,
        #[serde(default = "one")]
        v_set: f64,
        #[serde(default)]
        shunt_g: f64,
        #[serde(default)]
        shunt_b: f64,
    }

    #[derive(Serialize, Deserialize)]
    struct JsonBranch {
        from: usize,
        to: usize,
        r: f64,
        x: f64,
        #[serde(default)]
        b_charging: f64,
        #[serde(default = "one")]
        tap_ratio: f64,
        #[serde(default)]
        phase_shift: f64,
        #[serde(default = "yes")]
        status: bool,
    }

    #[derive(Serialize, Deserialize)]
    struct JsonGen {
        bus: usize,
        #[serde(default)]
        p_set: f64,
        #[serde(default)]
        q_set: f64,
        #[serde(default = "one")]
        v_set: f64,
    }

    #[derive(Serialize, Deserialize)]
    struct JsonConverter {
        bus: usize,
        mode: ConverterMode,
        #[serde(default)]
        i_max: Option<f64>,
        #[serde(default)]
        v_set: Option<f64>,
    }

    fn one() -> f64 {
        1.0
    }
    fn yes() -> bool {
        true
    }

    pub fn parse(text: &str) -> Result<NetworkCase, CaseError> {
        let jc: JsonCase = serde_json::from_str(text).map_err(|e| CaseError::Syntax {
            line: e.line(),
            message: e.to_string(),
            token: String::new(),
        })?;

        let buses = jc
            .buses
            .iter()
            .map(|b| BusRecord {
                id: b.id,
                role: b.role,
                p_load: b.p_load,
                q_load: b.q_load,
                v_set: b.v_set,
                shunt_g: b.shunt_g,
                shunt_b: b.shunt_b,
            })
            .collect();
        let branches = jc
            .branches
            .iter()
            .map(|b| BranchRecord {
                from: b.from,
                to: b.to,
                r: b.r,
                x: b.x,
                b_charging: b.b_charging,
                tap_ratio: b.tap_ratio,
                phase_shift: b.phase_shift,
                status: b.status,
            })
            .collect();
        let mut generators: Vec<GenRecord> = jc
            .generators
            .iter()
            .map(|g| GenRecord {
                bus: g.bus,
                p_set: g.p_set,
                q_set: g.q_set,
                v_set: g.v_set,
                i_max: None,
                mode_hint: ConverterMode::GridFormingPv,
            })
            .collect();
        // Converter block decorates the matching generator.
        for cv in &jc.converters {
            match generators.iter_mut().find(|g| g.bus == cv.bus) {
                Some(g) => {
                    g.i_max = cv.i_max;
                    g.mode_hint = cv.mode;
                    if let Some(v) = cv.v_set {
                        g.v_set = v;
                    }
                }
                None => {
                    return Err(CaseError::Semantic(format!(
                        "converter at bus {} has no matching generator",
                        cv.bus
                    )))
                }
            }
        }

        Ok(NetworkCase {
            name: jc.name,
            base_power: jc.base_mva,
            buses,
            branches,
            generators,
        })
    }

    pub fn serialize(case: &NetworkCase) -> String {
        let jc = JsonCase {
            name: case.name.clone(),
            base_mva: case.base_power,
            buses: case
                .buses
                .iter()
                .map(|b| JsonBus {
                    id: b.id,
                    role: b.role,
                    p_load: b.p_load,
                    q_load: b.q_load,
                    v_set: b.v_set,
                    shunt_g: b.shunt_g,
                    shunt_b: b.shunt_b,
                })
                .collect(),
            branches: case
                .branches
                .iter()
                .map(|b| JsonBranch {
                    from: b.from,
                    to: b.to,
                    r: b.r,
                    x: b.x,
                    b_charging: b.b_charging,
                    tap_ratio: b.tap_ratio,
                    phase_shift: b.phase_shift,
                    status: b.status,
                })
                .collect(),
            generators: case
                .generators
                .iter()
                .map(|g| JsonGen {
                    bus: g.bus,
                    p_set: g.p_set,
                    q_set: g.q_set,
                    v_set: g.v_set,
                })
                .collect(),
            converters: case
                .generators
                .iter()
                .filter(|g| g.i_max.is_some() || g.mode_hint == ConverterMode::GridFollowingPq)
                .map(|g| JsonConverter {
                    bus: g.bus,
                    mode: g.mode_hint,
                    i_max: g.i_max,
                    v_set: Some(g.v_set),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&jc).expect("serializable case")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_BUS_M: &str = "\
function mpc = two_bus
mpc.baseMVA = 100;
mpc.bus = [
  1 3 0   0  0 0 1 1.0 0 345 1 1.1 0.9;
  2 1 50  0  0 0 1 1.0 0 345 1 1.1 0.9;
];
mpc.gen = [
  1 0 0 999 -999 1.0 100 1 999 0;
];
mpc.branch = [
  1 2 0.0 0.25 0.0 0 0 0 0 0 1 -360 360;
];
";

    #[test]
    fn parses_minimal_matpower() {
        let case = parse_case(TWO_BUS_M, CaseFormat::MatpowerM).unwrap();
        assert_eq!(case.buses.len(), 2);
        assert_eq!(case.branches.len(), 1);
        assert_eq!(case.base_power, 100.0);
        assert_eq!(case.buses[0].role, BusRole::Slack);
        assert!((case.buses[1].p_load - 0.5).abs() < 1e-12);
        assert_eq!(case.branches[0].tap_ratio, 1.0);
    }

    #[test]
    fn dangling_branch_rejected() {
        let text = TWO_BUS_M.replace("1 2 0.0 0.25", "1 99 0.0 0.25");
        let err = parse_case(&text, CaseFormat::MatpowerM).unwrap_err();
        assert!(matches!(err, CaseError::Semantic(ref m) if m.contains("dangling")));
    }

    #[test]
    fn missing_slack_rejected() {
        let text = TWO_BUS_M.replace("1 3 0", "1 1 0");
        let err = parse_case(&text, CaseFormat::MatpowerM).unwrap_err();
        assert!(matches!(err, CaseError::Semantic(ref m) if m.contains("slack")));
    }

    #[test]
    fn zero_impedance_branch_rejected() {
        let text = TWO_BUS_M.replace("1 2 0.0 0.25", "1 2 0.0 0.0");
        assert!(parse_case(&text, CaseFormat::MatpowerM).is_err());
    }

    #[test]
    fn ybus_single_reactive_branch() {
        let case = parse_case(TWO_BUS_M, CaseFormat::MatpowerM).unwrap();
        let y = build_ybus(&case);
        // z = j0.25: diagonals -4j, off-diagonals +4j
        assert!((y.entries[(0, 0)] - Complex64::new(0.0, -4.0)).norm() < 1e-12);
        assert!((y.entries[(0, 1)] - Complex64::new(0.0, 4.0)).norm() < 1e-12);
        assert!((y.entries[(1, 0)] - Complex64::new(0.0, 4.0)).norm() < 1e-12);
        assert!((y.entries[(1, 1)] - Complex64::new(0.0, -4.0)).norm() < 1e-12);
    }

    #[test]
    fn ybus_three_bus_radial_incidence() {
        let case = crate::cases::three_bus();
        let y = build_ybus(&case);
        let z12 = Complex64::new(0.08, 0.40);
        let z23 = Complex64::new(0.10, 0.50);
        let y12 = Complex64::new(1.0, 0.0) / z12;
        let y23 = Complex64::new(1.0, 0.0) / z23;
        assert!((y.entries[(0, 0)] - y12).norm() < 1e-12);
        assert!((y.entries[(1, 1)] - (y12 + y23)).norm() < 1e-12);
        assert!((y.entries[(2, 2)] - y23).norm() < 1e-12);
        assert!((y.entries[(0, 1)] + y12).norm() < 1e-12);
        assert!((y.entries[(1, 2)] + y23).norm() < 1e-12);
        assert!((y.entries[(0, 2)]).norm() < 1e-12);
    }

    #[test]
    fn ybus_all_branches_out_is_shunt_diagonal() {
        let mut case = parse_case(TWO_BUS_M, CaseFormat::MatpowerM).unwrap();
        for br in &mut case.branches {
            br.status = false;
        }
        case.buses[0].shunt_b = 0.3;
        let y = build_ybus(&case);
        assert!((y.entries[(0, 0)] - Complex64::new(0.0, 0.3)).norm() < 1e-12);
        assert!(y.entries[(1, 1)].norm() < 1e-12);
        assert!(y.entries[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn ybus_symmetric_without_phase_shift() {
        let case = crate::cases::ieee39();
        let y = build_ybus(&case);
        for i in 0..y.order {
            for j in 0..y.order {
                assert!(
                    (y.entries[(i, j)] - y.entries[(j, i)]).norm() < 1e-12,
                    "asymmetry at ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn scale_loading_halves_loads() {
        let case = crate::cases::three_bus();
        let scaled = scale_loading(&case, 0.5, ScaleTarget::LoadsOnly);
        let bus2 = scaled.bus(2).unwrap();
        assert!((bus2.p_load - 1.0).abs() < 1e-12);
        assert!((bus2.q_load - 0.5).abs() < 1e-12);
        // original untouched, PV generator untouched
        assert!((case.bus(2).unwrap().p_load - 2.0).abs() < 1e-12);
        assert!((scaled.generators[0].p_set - case.generators[0].p_set).abs() < 1e-12);
    }

    #[test]
    fn scale_loading_identity_and_zero() {
        let case = crate::cases::three_bus();
        let same = scale_loading(&case, 1.0, ScaleTarget::LoadsAndIbrInjections);
        assert_eq!(case, same);
        let zero = scale_loading(&case, 0.0, ScaleTarget::LoadsAndIbrInjections);
        assert_eq!(zero.bus(2).unwrap().p_load, 0.0);
        assert_eq!(zero.generators[0].p_set, 0.0);
    }

    #[test]
    fn json_round_trip() {
        let case = crate::cases::ieee39_modified();
        let text = serialize_case(&case);
        let back = parse_case(&text, CaseFormat::NativeJson).unwrap();
        assert_eq!(case, back);
    }
}
