//! Text serialization of elements and gauge potentials.
//!
//! Element files start with `nctorus v1 N=<n> theta=<θ12> <θ13> <θ23>` and
//! hold one record `p1 p2 p3 row col re im` per matrix entry of each stored
//! coefficient (rows and columns are 0-based). Numbers use the shortest
//! round-trip representation, switching to exponent
//! notation for very large or small magnitudes. Blank lines and lines starting with `#`
//! are ignored.
//!
//! A potential is a manifest `A1=<path> A2=<path> A3=<path> k=<real>`, one
//! key per line, with paths relative to the manifest's directory.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::algebra::{Block, DeformationMatrix, MultiIndex, TorusElement};
use crate::error::{Error, Result};
use crate::gauge::{Coupling, GaugePotential};

const MAGIC: &str = "nctorus";
const VERSION: &str = "v1";

pub fn element_to_string(a: &TorusElement) -> String {
    let t = a.theta();
    let mut s = format!(
        "{MAGIC} {VERSION} N={} theta={:?} {:?} {:?}\n",
        a.n(),
        t.theta12(),
        t.theta13(),
        t.theta23()
    );
    for (p, b) in a.iter() {
        for row in 0..a.n() {
            for col in 0..a.n() {
                let z = b.get(row, col);
                let _ = writeln!(s, "{} {} {} {row} {col} {:?} {:?}", p.0[0], p.0[1], p.0[2], z.re, z.im);
            }
        }
    }
    s
}

pub fn write_element<W: Write>(mut w: W, a: &TorusElement) -> Result<()> {
    w.write_all(element_to_string(a).as_bytes())?;
    Ok(())
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_header(line: &str) -> std::result::Result<(usize, DeformationMatrix), String> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 6 || fields[0] != MAGIC {
        return Err(format!(
            "expected header `{MAGIC} {VERSION} N=<n> theta=<t12> <t13> <t23>`"
        ));
    }
    if fields[1] != VERSION {
        return Err(format!("unsupported format version `{}`", fields[1]));
    }
    let n: usize = fields[2]
        .strip_prefix("N=")
        .and_then(|v| v.parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("bad matrix size `{}`", fields[2]))?;
    let t12 = fields[3].strip_prefix("theta=").ok_or("missing `theta=`")?;
    let mut theta = [0.0f64; 3];
    for (slot, text) in theta.iter_mut().zip([t12, fields[4], fields[5]]) {
        *slot = text.parse::<f64>().map_err(|_| format!("bad theta entry `{text}`"))?;
        if !slot.is_finite() {
            return Err(format!("non-finite theta entry `{text}`"));
        }
    }
    let theta = DeformationMatrix::new(theta[0], theta[1], theta[2]).map_err(|e| e.to_string())?;
    Ok((n, theta))
}

/// Reads an element, rejecting malformed or duplicate records, non-finite
/// values and coefficients whose entries are all zero.
pub fn read_element<R: BufRead>(r: R) -> Result<TorusElement> {
    let mut header: Option<(usize, DeformationMatrix)> = None;
    // mode -> (entries, first line seen, entry-present mask)
    let mut blocks: BTreeMap<MultiIndex, (Vec<Complex64>, usize, Vec<bool>)> = BTreeMap::new();
    for (idx, line) in r.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let Some((n, _)) = header else {
            header = Some(parse_header(body).map_err(|m| parse_err(lineno, m))?);
            continue;
        };
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 7 {
            return Err(parse_err(lineno, format!("expected 7 fields, found {}", fields.len())));
        }
        let mut p = [0i64; 3];
        for (slot, text) in p.iter_mut().zip(&fields[..3]) {
            *slot = text
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad mode index `{text}`")))?;
        }
        let mut rc = [0usize; 2];
        for (slot, text) in rc.iter_mut().zip(&fields[3..5]) {
            *slot = text
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad matrix index `{text}`")))?;
            if *slot >= n {
                return Err(parse_err(lineno, format!("matrix index {slot} out of range for N={n}")));
            }
        }
        let mut z = [0.0f64; 2];
        for (slot, text) in z.iter_mut().zip(&fields[5..]) {
            *slot = text
                .parse()
                .map_err(|_| parse_err(lineno, format!("bad number `{text}`")))?;
            if !slot.is_finite() {
                return Err(parse_err(lineno, format!("non-finite value `{text}`")));
            }
        }
        let entry = match blocks.entry(MultiIndex(p)) {
            Entry::Occupied(o) => o.into_mut(),
            Entry::Vacant(v) => v.insert((vec![Complex64::default(); n * n], lineno, vec![false; n * n])),
        };
        let k = rc[0] * n + rc[1];
        if entry.2[k] {
            return Err(parse_err(
                lineno,
                format!(
                    "duplicate record for mode {} entry ({}, {})",
                    MultiIndex(p),
                    rc[0],
                    rc[1]
                ),
            ));
        }
        entry.2[k] = true;
        entry.0[k] = Complex64::new(z[0], z[1]);
    }
    let Some((n, theta)) = header else {
        return Err(parse_err(1, "missing header"));
    };
    let mut coeffs = Vec::with_capacity(blocks.len());
    for (p, (data, first, _)) in blocks {
        let b = Block::from_row_major(n, data)?;
        if b.is_zero() {
            return Err(parse_err(first, format!("coefficient at mode {p} is zero")));
        }
        coeffs.push((p, b));
    }
    TorusElement::from_coeffs(theta, n, coeffs)
}

pub fn element_from_str(s: &str) -> Result<TorusElement> {
    read_element(s.as_bytes())
}

pub fn save_element(path: &Path, a: &TorusElement) -> Result<()> {
    fs::write(path, element_to_string(a))?;
    Ok(())
}

pub fn load_element(path: &Path) -> Result<TorusElement> {
    let file = fs::File::open(path)?;
    read_element(std::io::BufReader::new(file))
}

/// Parsed potential manifest with paths resolved against its directory.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialManifest {
    pub components: [PathBuf; 3],
    pub k: f64,
}

impl PotentialManifest {
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut paths: [Option<PathBuf>; 3] = Default::default();
        let mut k = None;
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let body = line.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| parse_err(lineno, "expected `key=value`"))?;
            let (key, value) = (key.trim(), value.trim());
            let slot = match key {
                "A1" => &mut paths[0],
                "A2" => &mut paths[1],
                "A3" => &mut paths[2],
                "k" => {
                    if k.is_some() {
                        return Err(parse_err(lineno, "duplicate key `k`"));
                    }
                    k = Some(
                        value
                            .parse::<f64>()
                            .map_err(|_| parse_err(lineno, format!("bad coupling `{value}`")))?,
                    );
                    continue;
                }
                other => return Err(parse_err(lineno, format!("unknown key `{other}`"))),
            };
            if slot.is_some() {
                return Err(parse_err(lineno, format!("duplicate key `{key}`")));
            }
            *slot = Some(base.join(value));
        }
        let missing = |what: &str| parse_err(text.lines().count().max(1), format!("missing key `{what}`"));
        let [a1, a2, a3] = paths;
        Ok(PotentialManifest {
            components: [
                a1.ok_or_else(|| missing("A1"))?,
                a2.ok_or_else(|| missing("A2"))?,
                a3.ok_or_else(|| missing("A3"))?,
            ],
            k: k.ok_or_else(|| missing("k"))?,
        })
    }
}

/// Writes `<manifest>` and its three component files `<stem>.A<i>.nct` next to it.
pub fn save_potential(manifest: &Path, a: &GaugePotential, k: Coupling) -> Result<()> {
    let stem = manifest
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Error::Argument(format!("bad manifest path {}", manifest.display())))?;
    let dir = manifest.parent().unwrap_or(Path::new(""));
    let mut text = String::new();
    for (i, comp) in a.components().iter().enumerate() {
        let name = format!("{stem}.A{}.nct", i + 1);
        save_element(&dir.join(&name), comp)?;
        let _ = writeln!(text, "A{}={name}", i + 1);
    }
    let _ = writeln!(text, "k={}", k.value());
    fs::write(manifest, text)?;
    Ok(())
}

/// Loads a potential; components must be hermitian (see [`GaugePotential::new`]).
pub fn load_potential(manifest: &Path) -> Result<(GaugePotential, Coupling)> {
    let text = fs::read_to_string(manifest)?;
    let base = manifest.parent().unwrap_or(Path::new(""));
    let m = PotentialManifest::parse(&text, base)?;
    let [a1, a2, a3] = &m.components;
    let comps = [load_element(a1)?, load_element(a2)?, load_element(a3)?];
    Ok((GaugePotential::new(comps)?, Coupling::new(m.k)?))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::random::{random_element, random_hermitian, seeded};

    const HEADER: &str = "nctorus v1 N=1 theta=0.25 0 0\n";

    fn parse_line(text: &str) -> usize {
        match element_from_str(text) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn format_of_a_small_element() {
        let t = DeformationMatrix::planar(0.25).unwrap();
        let a = TorusElement::from_scalars(t, [(MultiIndex::new(1, -2, 0), Complex64::new(0.5, -1e-300))]).unwrap();
        assert_eq!(
            element_to_string(&a),
            "nctorus v1 N=1 theta=0.25 0.0 0.0\n1 -2 0 0 0 0.5 -1e-300\n"
        );
    }

    #[test]
    fn round_trip_is_exact() {
        let t = DeformationMatrix::new(1.0 / 3.0, 2f64.sqrt() - 1.0, -0.1).unwrap();
        let mut rng = seeded(3);
        for n in 1..=3 {
            let a = random_element(&mut rng, t, n, 3, 12);
            let back = element_from_str(&element_to_string(&a)).unwrap();
            assert_eq!(back, a);
        }
        let zero = TorusElement::zero(t, 2);
        assert_eq!(element_from_str(&element_to_string(&zero)).unwrap(), zero);
    }

    #[test]
    fn missing_entries_default_to_zero() {
        let text = "nctorus v1 N=2 theta=0 0 0\n# comment\n\n0 0 0 1 0 2 0\n";
        let a = element_from_str(text).unwrap();
        assert_eq!(a.coeff(MultiIndex::ZERO).unwrap().get(1, 0), Complex64::new(2.0, 0.0));
        assert_eq!(a.coeff(MultiIndex::ZERO).unwrap().get(0, 0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn rejects_malformed_input_with_line_numbers() {
        assert_eq!(parse_line(""), 1);
        assert_eq!(parse_line("nctorus v2 N=1 theta=0 0 0\n"), 1);
        assert_eq!(parse_line("nctorus v1 N=0 theta=0 0 0\n"), 1);
        assert_eq!(parse_line("nctorus v1 N=1 theta=nan 0 0\n"), 1);
        assert_eq!(parse_line(&format!("{HEADER}0 0 0 0 0 1\n")), 2);
        assert_eq!(parse_line(&format!("{HEADER}0 0 0 0 0 1 0\n0 x 0 0 0 1 0\n")), 3);
        assert_eq!(parse_line(&format!("{HEADER}0 0 0 0 1 1 0\n")), 2);
        assert_eq!(parse_line(&format!("{HEADER}\n0 0 0 0 0 inf 0\n")), 3);
        assert_eq!(parse_line(&format!("{HEADER}1 0 0 0 0 1 0\n1 0 0 0 0 2 0\n")), 3);
        assert_eq!(parse_line(&format!("{HEADER}1 0 0 0 0 1 0\n2 0 0 0 0 0 -0\n")), 3);
    }

    #[test]
    fn potential_round_trip() {
        let dir = std::env::temp_dir().join(format!("nctorus-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let t = DeformationMatrix::planar(0.2).unwrap();
        let mut rng = seeded(5);
        let a = GaugePotential::new(std::array::from_fn(|_| random_hermitian(&mut rng, t, 2, 2, 4))).unwrap();
        let path = dir.join("pot.txt");
        save_potential(&path, &a, Coupling::new(3.5).unwrap()).unwrap();
        let (b, k) = load_potential(&path).unwrap();
        assert_eq!(b, a);
        assert_eq!(k.value(), 3.5);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("A1=pot.A1.nct\n"));
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn manifest_errors() {
        let base = Path::new("/data");
        let m = PotentialManifest::parse("A1=a\nA2=b\nA3=c\nk=2\n", base).unwrap();
        assert_eq!(m.components[1], PathBuf::from("/data/b"));
        for (text, line) in [
            ("A1=a\nA1=b\n", 2),
            ("A1=a\nA2=b\nA3=c\nk=x\n", 4),
            ("A4=a\n", 1),
            ("A1 a\n", 1),
            ("A1=a\nA2=b\nk=1\n", 3),
        ] {
            match PotentialManifest::parse(text, base) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn arbitrary_finite_values_round_trip(
            re in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL,
            im in prop::num::f64::NORMAL | prop::num::f64::ZERO,
            p in prop::array::uniform3(-50i64..50),
            t12 in -1.0f64..1.0,
        ) {
            let t = DeformationMatrix::new(t12, 0.0, 0.5).unwrap();
            let a = TorusElement::from_scalars(t, [(MultiIndex(p), Complex64::new(re, im))]).unwrap();
            prop_assert_eq!(element_from_str(&element_to_string(&a)).unwrap(), a);
        }
    }
}
