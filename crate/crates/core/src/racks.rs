//! Finite groups, pointed racks, validation and presets.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_PRESET_ORDER: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    pub elements: Vec<String>,
    /// `mul[a][b] = a·b`.
    pub mul: Vec<Vec<usize>>,
    pub unit: usize,
    pub inv: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupJson {
    pub elements: Vec<String>,
    pub mul: Vec<Vec<usize>>,
    pub unit: usize,
}

impl FiniteGroup {
    /// Validates the table and derives inverses.
    pub fn from_table(name: &str, elements: Vec<String>, mul: Vec<Vec<usize>>, unit: usize) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty element list".into()));
        }
        if mul.len() != n || mul.iter().any(|r| r.len() != n) || unit >= n {
            return Err(Error::InvalidGroup("table shape does not match element count".into()));
        }
        if mul.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        for a in 0..n {
            if mul[unit][a] != a || mul[a][unit] != a {
                return Err(Error::InvalidGroup(format!("unit law fails at {}", elements[a])));
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| mul[a][b] == unit && mul[b][a] == unit) {
                Some(b) => inv[a] = b,
                None => return Err(Error::InvalidGroup(format!("{} has no inverse", elements[a]))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a][b];
                for c in 0..n {
                    if mul[ab][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup { name: name.to_string(), elements, mul, unit, inv })
    }

    pub fn from_json(j: GroupJson) -> Result<Self> {
        Self::from_table("json", j.elements, j.mul, j.unit)
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson { elements: self.elements.clone(), mul: self.mul.clone(), unit: self.unit }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn m(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    /// h ◁ g = g⁻¹ h g.
    pub fn conj(&self, h: usize, g: usize) -> usize {
        self.mul[self.mul[self.inv[g]][h]][g]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for a in 0..n {
            if seen[a] {
                continue;
            }
            let mut cls: Vec<usize> = (0..n).map(|g| self.conj(a, g)).collect();
            cls.sort();
            cls.dedup();
            for &c in &cls {
                seen[c] = true;
            }
            out.push(cls);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedRack {
    pub name: String,
    pub elements: Vec<String>,
    /// `op[x][y] = x ◁ y`.
    pub op: Vec<Vec<usize>>,
    pub basepoint: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RackJson {
    pub elements: Vec<String>,
    pub op: Vec<Vec<usize>>,
    pub basepoint: usize,
}

/// One failed rack axiom with its witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RackViolation {
    pub axiom: String,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RackReport {
    pub valid: bool,
    pub violations: Vec<RackViolation>,
}

/// Checks the axioms; returns the rack or a report naming every failure.
pub fn validate_rack(
    name: &str,
    elements: Vec<String>,
    op: Vec<Vec<usize>>,
    basepoint: usize,
) -> std::result::Result<PointedRack, RackReport> {
    let n = elements.len();
    let mut violations = Vec::new();
    let shape_ok = n > 0 && op.len() == n && op.iter().all(|r| r.len() == n) && basepoint < n;
    if !shape_ok || op.iter().flatten().any(|&x| x >= n) {
        violations.push(RackViolation { axiom: "table shape".into(), witness: vec![] });
        return Err(RackReport { valid: false, violations });
    }
    for g in 0..n {
        let mut hit = vec![false; n];
        for x in 0..n {
            hit[op[x][g]] = true;
        }
        if let Some(missing) = hit.iter().position(|h| !h) {
            violations.push(RackViolation { axiom: "right translation bijective".into(), witness: vec![g, missing] });
        }
    }
    for k in 0..n {
        for h in 0..n {
            for g in 0..n {
                if op[op[k][h]][g] != op[op[k][g]][op[h][g]] {
                    violations.push(RackViolation { axiom: "self-distributivity".into(), witness: vec![k, h, g] });
                }
            }
        }
    }
    let e = basepoint;
    for g in 0..n {
        if op[e][g] != e {
            violations.push(RackViolation { axiom: "e ◁ g = e".into(), witness: vec![g] });
        }
        if op[g][e] != g {
            violations.push(RackViolation { axiom: "g ◁ e = g".into(), witness: vec![g] });
        }
    }
    if violations.is_empty() {
        Ok(PointedRack { name: name.to_string(), elements, op, basepoint })
    } else {
        Err(RackReport { valid: false, violations })
    }
}

impl PointedRack {
    pub fn from_json(j: RackJson) -> std::result::Result<Self, RackReport> {
        validate_rack("json", j.elements, j.op, j.basepoint)
    }

    pub fn to_json(&self) -> RackJson {
        RackJson { elements: self.elements.clone(), op: self.op.clone(), basepoint: self.basepoint }
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn act(&self, x: usize, y: usize) -> usize {
        self.op[x][y]
    }

    pub fn is_trivial(&self) -> bool {
        (0..self.size()).all(|x| (0..self.size()).all(|y| self.op[x][y] == x))
    }

    /// Orbits of X ∖ {e} under all right translations.
    pub fn nontrivial_orbits(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for x in 0..n {
            for y in 0..n {
                let a = find(&mut parent, x);
                let b = find(&mut parent, self.op[x][y]);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut idx: HashMap<usize, usize> = HashMap::new();
        for x in 0..n {
            if x == self.basepoint {
                continue;
            }
            let r = find(&mut parent, x);
            let k = *idx.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[k].push(x);
        }
        groups
    }
}

pub fn conj_rack(g: &FiniteGroup) -> PointedRack {
    let n = g.order();
    let op = (0..n).map(|h| (0..n).map(|k| g.conj(h, k)).collect()).collect();
    validate_rack(&format!("conj:{}", g.name), g.elements.clone(), op, g.unit)
        .expect("conjugation of a valid group is a pointed rack")
}

pub fn trivial_rack(n: usize) -> Result<PointedRack> {
    if n == 0 {
        return Err(Error::BadInput("trivial rack needs at least one element".into()));
    }
    let op = (0..n).map(|x| vec![x; n]).collect();
    validate_rack(&format!("trivial_rack:{n}"), (0..n).map(|i| i.to_string()).collect(), op, 0)
        .map_err(|r| Error::InvalidRack(format!("{:?}", r.violations)))
}

pub fn cyclic_group(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > MAX_PRESET_ORDER {
        return Err(Error::BadInput(format!("cyclic order {n} out of range")));
    }
    let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_table(&format!("cyclic:{n}"), (0..n).map(|i| i.to_string()).collect(), mul, 0)
}

pub fn product_group(orders: &[usize]) -> Result<FiniteGroup> {
    if orders.is_empty() || orders.contains(&0) {
        return Err(Error::BadInput("product needs positive factor orders".into()));
    }
    let total: usize = orders.iter().product();
    if total > MAX_PRESET_ORDER {
        return Err(Error::BadInput(format!("product order {total} too large")));
    }
    let digits = |mut x: usize| -> Vec<usize> {
        let mut d = vec![0; orders.len()];
        for i in (0..orders.len()).rev() {
            d[i] = x % orders[i];
            x /= orders[i];
        }
        d
    };
    let index = |d: &[usize]| d.iter().zip(orders).fold(0, |acc, (x, m)| acc * m + x);
    let elements = (0..total)
        .map(|x| {
            let d: Vec<String> = digits(x).iter().map(|v| v.to_string()).collect();
            format!("({})", d.join(","))
        })
        .collect();
    let mul = (0..total)
        .map(|a| {
            (0..total)
                .map(|b| {
                    let (da, db) = (digits(a), digits(b));
                    let s: Vec<usize> = (0..orders.len()).map(|i| (da[i] + db[i]) % orders[i]).collect();
                    index(&s)
                })
                .collect()
        })
        .collect();
    let name = format!("product:{}", orders.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(","));
    FiniteGroup::from_table(&name, elements, mul, 0)
}

/// Dihedral group of order 2n; element (k, e) stands for r^k s^e.
pub fn dihedral_group(n: usize) -> Result<FiniteGroup> {
    if n == 0 || 2 * n > MAX_PRESET_ORDER {
        return Err(Error::BadInput(format!("dihedral parameter {n} out of range")));
    }
    let idx = |k: usize, e: usize| e * n + k;
    let mut elements = vec![String::new(); 2 * n];
    for e in 0..2 {
        for k in 0..n {
            elements[idx(k, e)] = match (k, e) {
                (0, 0) => "1".to_string(),
                (k, 0) => format!("r{k}"),
                (0, _) => "s".to_string(),
                (k, _) => format!("r{k}s"),
            };
        }
    }
    let mut mul = vec![vec![0; 2 * n]; 2 * n];
    for e1 in 0..2 {
        for k1 in 0..n {
            for e2 in 0..2 {
                for k2 in 0..n {
                    // r^k1 s^e1 r^k2 s^e2 = r^(k1 ± k2) s^(e1+e2)
                    let k = if e1 == 0 { (k1 + k2) % n } else { (k1 + n - k2) % n };
                    mul[idx(k1, e1)][idx(k2, e2)] = idx(k, (e1 + e2) % 2);
                }
            }
        }
    }
    FiniteGroup::from_table(&format!("dihedral:{n}"), elements, mul, 0)
}

/// Symmetric group on {1..n}; product is composition `(ab)(x) = a(b(x))`.
pub fn symmetric_group(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 5 {
        return Err(Error::BadInput(format!("symmetric degree {n} out of range (1..=5)")));
    }
    let perms = crate::shuffles::Permutation::all(n);
    let index: HashMap<Vec<usize>, usize> = perms.iter().enumerate().map(|(i, p)| (p.images.clone(), i)).collect();
    let elements = perms.iter().map(|p| p.to_string()).collect();
    let mul = perms.iter().map(|a| perms.iter().map(|b| index[&a.compose(b).images]).collect()).collect();
    FiniteGroup::from_table(&format!("symmetric:{n}"), elements, mul, 0)
}

/// Quaternion group of order 8.
pub fn quaternion_group() -> Result<FiniteGroup> {
    // units 1, i, j, k with sign; index = 4*neg + unit
    let unit_mul = |a: usize, b: usize| -> (usize, bool) {
        // returns (unit, negate)
        match (a, b) {
            (0, x) | (x, 0) => (x, false),
            (x, y) if x == y => (0, true),
            (1, 2) => (3, false),
            (2, 1) => (3, true),
            (2, 3) => (1, false),
            (3, 2) => (1, true),
            (3, 1) => (2, false),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    };
    let names = ["1", "i", "j", "k"];
    let elements = (0..8).map(|x| format!("{}{}", if x >= 4 { "-" } else { "" }, names[x % 4])).collect();
    let mul = (0..8)
        .map(|a: usize| {
            (0..8)
                .map(|b: usize| {
                    let (u, neg) = unit_mul(a % 4, b % 4);
                    let s = (a >= 4) ^ (b >= 4) ^ neg;
                    u + if s { 4 } else { 0 }
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_table("quaternion:8", elements, mul, 0)
}

#[derive(Clone, Debug)]
pub enum Preset {
    Group(FiniteGroup),
    Rack(PointedRack),
}

fn parse_n(s: &str, what: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::UnknownPreset(format!("{what}:{s}")))
}

pub fn preset(name: &str) -> Result<Preset> {
    let (head, rest) = name.split_once(':').unwrap_or((name, ""));
    match head {
        "cyclic" => Ok(Preset::Group(cyclic_group(parse_n(rest, head)?)?)),
        "product" => {
            let orders = rest.split(',').map(|x| parse_n(x, head)).collect::<Result<Vec<_>>>()?;
            Ok(Preset::Group(product_group(&orders)?))
        }
        "dihedral" => Ok(Preset::Group(dihedral_group(parse_n(rest, head)?)?)),
        "symmetric" => Ok(Preset::Group(symmetric_group(parse_n(rest, head)?)?)),
        "quaternion" if rest == "8" => Ok(Preset::Group(quaternion_group()?)),
        "trivial_rack" => Ok(Preset::Rack(trivial_rack(parse_n(rest, head)?)?)),
        "conj" => match preset(rest)? {
            Preset::Group(g) => Ok(Preset::Rack(conj_rack(&g))),
            Preset::Rack(_) => Err(Error::UnknownPreset(name.to_string())),
        },
        _ => Err(Error::UnknownPreset(name.to_string())),
    }
}

pub fn group_preset(name: &str) -> Result<FiniteGroup> {
    match preset(name)? {
        Preset::Group(g) => Ok(g),
        Preset::Rack(_) => Err(Error::BadInput(format!("'{name}' is a rack, a group is needed"))),
    }
}

/// Racks accept either a rack preset or a group preset (via conjugation).
pub fn rack_preset(name: &str) -> Result<PointedRack> {
    match preset(name)? {
        Preset::Rack(r) => Ok(r),
        Preset::Group(g) => Ok(conj_rack(&g)),
    }
}

/// Every preset name exercised by the suites.
pub fn standard_group_presets() -> Vec<&'static str> {
    vec!["cyclic:2", "cyclic:3", "product:2,2", "dihedral:3", "symmetric:3", "quaternion:8"]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_rack_is_valid_with_any_basepoint() {
        for b in 0..3 {
            let op = (0..3).map(|x| vec![x; 3]).collect();
            assert!(validate_rack("t", vec!["a".into(), "b".into(), "c".into()], op, b).is_ok());
        }
    }

    #[test]
    fn conj_s3_example() {
        let g = symmetric_group(3).unwrap();
        let r = conj_rack(&g);
        let t12 = g.index_of("[2,1,3]").unwrap();
        let t13 = g.index_of("[3,2,1]").unwrap();
        let t23 = g.index_of("[1,3,2]").unwrap();
        assert_eq!(r.act(t12, t13), t23);
    }

    #[test]
    fn dihedral_quandle_fails_pointing() {
        // x ◁ y = 2y − x mod 3
        let op: Vec<Vec<usize>> = (0..3).map(|x| (0..3).map(|y| (2 * y + 3 - x) % 3).collect()).collect();
        for b in 0..3 {
            let rep = validate_rack("dq", vec!["0".into(), "1".into(), "2".into()], op.clone(), b).unwrap_err();
            assert!(rep.violations.iter().any(|v| v.axiom == "g ◁ e = g"));
        }
        let rep = validate_rack("dq", vec!["0".into(), "1".into(), "2".into()], op, 0).unwrap_err();
        assert!(rep.violations.contains(&RackViolation { axiom: "g ◁ e = g".into(), witness: vec![1] }));
    }

    #[test]
    fn abelian_conjugation_is_trivial() {
        for name in ["cyclic:2", "cyclic:5", "product:2,2", "product:2,3"] {
            let g = group_preset(name).unwrap();
            assert!(g.is_abelian());
            let r = conj_rack(&g);
            let t = trivial_rack(g.order()).unwrap();
            assert_eq!(r.op, t.op);
        }
    }

    #[test]
    fn presets_validate() {
        for name in standard_group_presets() {
            let g = group_preset(name).unwrap();
            let r = conj_rack(&g);
            assert_eq!(r.size(), g.order());
        }
        assert_eq!(group_preset("symmetric:3").unwrap().order(), 6);
        assert_eq!(group_preset("quaternion:8").unwrap().order(), 8);
        assert_eq!(group_preset("dihedral:4").unwrap().order(), 8);
        assert_eq!(rack_preset("conj:symmetric:3").unwrap().size(), 6);
        assert!(matches!(preset("bogus:3"), Err(Error::UnknownPreset(_))));
        assert!(matches!(preset("conj:trivial_rack:2"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn orbits_are_conjugacy_classes() {
        for name in standard_group_presets() {
            let g = group_preset(name).unwrap();
            let r = conj_rack(&g);
            let mut orbits = r.nontrivial_orbits();
            orbits.iter_mut().for_each(|o| o.sort());
            orbits.sort();
            let mut classes: Vec<Vec<usize>> =
                g.conjugacy_classes().into_iter().filter(|c| c != &vec![g.unit]).collect();
            classes.sort();
            assert_eq!(orbits, classes, "{name}");
        }
    }

    #[test]
    fn quaternion_is_nonabelian_with_five_classes() {
        let g = quaternion_group().unwrap();
        assert!(!g.is_abelian());
        assert_eq!(g.conjugacy_classes().len(), 5);
    }

    #[test]
    fn random_tables_get_a_verdict() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.random_range(1..=8);
            let op: Vec<Vec<usize>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(0..n)).collect()).collect();
            let b = rng.random_range(0..n);
            let res = validate_rack("r", (0..n).map(|i| i.to_string()).collect(), op, b);
            if let Err(rep) = res {
                assert!(!rep.violations.is_empty());
            }
        }
    }
}
