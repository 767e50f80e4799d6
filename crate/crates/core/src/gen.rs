//! Exact rational point-set generators.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kernel::{PointSet, ShiftVector, TorusPoint};
use crate::scalar::{rat, Rational};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// `n` points `k / denominator` with `k` uniform, from a ChaCha8 stream.
pub fn gen_random(n: usize, d: usize, denominator: u64, seed: u64) -> Result<PointSet> {
    if n == 0 || d == 0 || denominator < 2 {
        return Err(invalid("random needs n >= 1, d >= 1, den >= 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let den = denominator as i64;
    let points = (0..n)
        .map(|_| TorusPoint::new((0..d).map(|_| rat(rng.gen_range(0..den), den))))
        .collect();
    PointSet::new(d, points, format!("random:n={n},d={d},den={denominator},seed={seed}"))
}

/// Rank-1 lattice `({i/n}, {i a/n}, ..., {i a^{d-1}/n})`, `i = 0..n`.
pub fn gen_korobov(n: usize, a: usize, d: usize) -> Result<PointSet> {
    if n == 0 || d == 0 || (n > 1 && !(1..n).contains(&a)) || (n == 1 && a != 1) {
        return Err(invalid("korobov needs n >= 1 and 1 <= a < n"));
    }
    let n64 = n as i64;
    let mut gens = vec![1i64];
    for _ in 1..d {
        let last = *gens.last().expect("nonempty");
        gens.push(last * a as i64 % n64);
    }
    let points = (0..n64)
        .map(|i| TorusPoint::new(gens.iter().map(|g| rat(i * g % n64, n64))))
        .collect();
    PointSet::new(d, points, format!("korobov:n={n},a={a},d={d}"))
}

/// Radical inverse of `i` in `base` as an exact rational.
pub fn radical_inverse(mut i: u64, base: u64) -> Rational {
    let mut num = 0i64;
    let mut den = 1i64;
    while i > 0 {
        num = num * base as i64 + (i % base) as i64;
        den *= base as i64;
        i /= base;
    }
    rat(num, den)
}

pub fn gen_van_der_corput(n: usize, base: u64) -> Result<PointSet> {
    if n == 0 || base < 2 {
        return Err(invalid("van der Corput needs n >= 1 and base >= 2"));
    }
    let points = (0..n as u64).map(|i| TorusPoint::new([radical_inverse(i, base)])).collect();
    PointSet::new(1, points, format!("vdc:n={n},base={base}"))
}

/// `(i/n, phi_{b_1}(i), ..., phi_{b_{d-1}}(i))`; `bases` has `d - 1` entries.
pub fn gen_hammersley(n: usize, d: usize, bases: &[u64]) -> Result<PointSet> {
    if n == 0 || d == 0 || bases.len() != d - 1 {
        return Err(invalid("hammersley needs n >= 1 and d - 1 bases"));
    }
    for (k, &b) in bases.iter().enumerate() {
        if b < 2 {
            return Err(invalid("hammersley bases must be >= 2"));
        }
        if bases[..k].iter().any(|&c| c.gcd(&b) != 1) {
            return Err(invalid("hammersley bases must be pairwise coprime"));
        }
    }
    let n64 = n as i64;
    let points = (0..n as u64)
        .map(|i| {
            TorusPoint::new(
                std::iter::once(rat(i as i64, n64)).chain(bases.iter().map(|&b| radical_inverse(i, b))),
            )
        })
        .collect();
    let list: Vec<String> = bases.iter().map(u64::to_string).collect();
    PointSet::new(d, points, format!("hammersley:n={n},d={d},bases={}", list.join("+")))
}

/// Residues of `x + Z`; side flags of `Z` are ignored.
pub fn apply_shift(d: &PointSet, z: &ShiftVector) -> Result<PointSet> {
    if z.dim() != d.dim() {
        return Err(Error::DimensionMismatch { expected: d.dim(), found: z.dim() });
    }
    let shift = z.values();
    let points = d
        .points()
        .iter()
        .map(|p| TorusPoint::new(p.coords().iter().zip(&shift).map(|(x, s)| x + s)))
        .collect();
    PointSet::new(d.dim(), points, d.label())
}

/// A point-set source, written `kind:key=value,...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSpec {
    Random { n: usize, d: usize, den: u64, seed: u64 },
    Korobov { n: usize, a: usize, d: usize },
    VanDerCorput { n: usize, base: u64 },
    Hammersley { n: usize, d: usize, bases: Vec<u64> },
    Explicit { path: PathBuf },
}

impl GeneratorSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GeneratorSpec::Random { .. } => "random",
            GeneratorSpec::Korobov { .. } => "korobov",
            GeneratorSpec::VanDerCorput { .. } => "vdc",
            GeneratorSpec::Hammersley { .. } => "hammersley",
            GeneratorSpec::Explicit { .. } => "explicit",
        }
    }

    pub fn generate(&self) -> Result<PointSet> {
        match self {
            GeneratorSpec::Random { n, d, den, seed } => gen_random(*n, *d, *den, *seed),
            GeneratorSpec::Korobov { n, a, d } => gen_korobov(*n, *a, *d),
            GeneratorSpec::VanDerCorput { n, base } => gen_van_der_corput(*n, *base),
            GeneratorSpec::Hammersley { n, d, bases } => gen_hammersley(*n, *d, bases),
            GeneratorSpec::Explicit { path } => {
                let label = path.display().to_string();
                let set = PointSet::from_json(&std::fs::read_to_string(path)?)?;
                Ok(if set.label().is_empty() { set.with_label(label) } else { set })
            }
        }
    }

    /// Expands integer ranges `key=lo..hi` (inclusive) into one spec per value,
    /// in increasing order. Several ranges expand as a product, leftmost slowest.
    pub fn expand(s: &str) -> Result<Vec<GeneratorSpec>> {
        let (kind, params) = s.split_once(':').unwrap_or((s, ""));
        let mut variants: Vec<Vec<String>> = vec![Vec::new()];
        for part in params.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| invalid(format!("bad parameter {part:?}")))?;
            let values: Vec<String> = match value.split_once("..") {
                Some((lo, hi)) => {
                    let lo: u64 = lo.parse().map_err(|_| invalid(format!("bad range {value:?}")))?;
                    let hi: u64 = hi.parse().map_err(|_| invalid(format!("bad range {value:?}")))?;
                    if lo > hi {
                        return Err(invalid(format!("empty range {value:?}")));
                    }
                    (lo..=hi).map(|v| format!("{key}={v}")).collect()
                }
                None => vec![part.to_string()],
            };
            variants = variants
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v.clone());
                        p
                    })
                })
                .collect();
        }
        variants.into_iter().map(|p| format!("{kind}:{}", p.join(",")).parse()).collect()
    }
}

fn parse_params(s: &str) -> Result<Vec<(String, String)>> {
    s.split(',')
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| invalid(format!("bad parameter {p:?}")))
        })
        .collect()
}

struct Params(Vec<(String, String)>);

impl Params {
    fn take<T: FromStr>(&self, key: &str, default: Option<T>) -> Result<T> {
        match self.0.iter().find(|(k, _)| k == key) {
            Some((_, v)) => v.parse().map_err(|_| invalid(format!("bad value for {key}: {v:?}"))),
            None => default.ok_or_else(|| invalid(format!("missing parameter {key}"))),
        }
    }

    fn check_known(&self, known: &[&str]) -> Result<()> {
        match self.0.iter().find(|(k, _)| !known.contains(&k.as_str())) {
            Some((k, _)) => Err(invalid(format!("unknown parameter {k}"))),
            None => Ok(()),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let p = Params(parse_params(rest)?);
        let spec = match kind.trim() {
            "random" => {
                p.check_known(&["n", "d", "den", "seed"])?;
                GeneratorSpec::Random {
                    n: p.take("n", None)?,
                    d: p.take("d", Some(1))?,
                    den: p.take("den", Some(64))?,
                    seed: p.take("seed", Some(0))?,
                }
            }
            "korobov" => {
                p.check_known(&["n", "a", "d"])?;
                GeneratorSpec::Korobov { n: p.take("n", None)?, a: p.take("a", None)?, d: p.take("d", Some(2))? }
            }
            "vdc" | "van_der_corput" => {
                p.check_known(&["n", "base"])?;
                GeneratorSpec::VanDerCorput { n: p.take("n", None)?, base: p.take("base", Some(2))? }
            }
            "hammersley" => {
                p.check_known(&["n", "d", "bases"])?;
                let d: usize = p.take("d", Some(2))?;
                let default_bases = (d == 2).then(|| "2".to_string());
                let bases: String = p.take("bases", default_bases)?;
                let bases = bases
                    .split('+')
                    .map(|b| b.parse().map_err(|_| invalid(format!("bad base {b:?}"))))
                    .collect::<Result<Vec<u64>>>()?;
                GeneratorSpec::Hammersley { n: p.take("n", None)?, d, bases }
            }
            "explicit" | "file" => {
                p.check_known(&["path"])?;
                GeneratorSpec::Explicit { path: PathBuf::from(p.take::<String>("path", None)?) }
            }
            other => return Err(invalid(format!("unknown generator {other:?}"))),
        };
        Ok(spec)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Random { n, d, den, seed } => write!(f, "random:n={n},d={d},den={den},seed={seed}"),
            GeneratorSpec::Korobov { n, a, d } => write!(f, "korobov:n={n},a={a},d={d}"),
            GeneratorSpec::VanDerCorput { n, base } => write!(f, "vdc:n={n},base={base}"),
            GeneratorSpec::Hammersley { n, d, bases } => {
                let list: Vec<String> = bases.iter().map(u64::to_string).collect();
                write!(f, "hammersley:n={n},d={d},bases={}", list.join("+"))
            }
            GeneratorSpec::Explicit { path } => write!(f, "explicit:path={}", path.display()),
        }
    }
}

impl Serialize for GeneratorSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GeneratorSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Generator strings of the built-in corpus: lattices, van der Corput and
/// Hammersley sets with `n <= 16`, and random sets (`N <= 12` for `d <= 2`,
/// `N <= 5` for `d = 3`).
pub fn default_corpus_specs() -> Vec<String> {
    let mut v = Vec::new();
    for (n, a) in [(5, 2), (8, 3), (8, 5), (13, 5), (16, 7)] {
        v.push(format!("korobov:n={n},a={a},d=2"));
    }
    for n in [3, 7, 12] {
        v.push(format!("korobov:n={n},a=1,d=1"));
    }
    for n in [1, 2, 3, 5, 8, 11, 16] {
        v.push(format!("vdc:n={n},base=2"));
    }
    v.push("vdc:n=9,base=3".into());
    for n in [2, 4, 7, 11, 16] {
        v.push(format!("hammersley:n={n},d=2,bases=2"));
    }
    v.push("hammersley:n=9,d=2,bases=3".into());
    for (n, seed) in [(1, 1), (3, 2), (6, 3), (9, 4), (12, 5)] {
        v.push(format!("random:n={n},d=1,den=24,seed={seed}"));
    }
    for (n, seed) in [(1, 6), (2, 7), (4, 8), (7, 9), (10, 10), (12, 11)] {
        v.push(format!("random:n={n},d=2,den=12,seed={seed}"));
    }
    for (n, seed) in [(1, 12), (2, 13), (3, 14), (5, 15)] {
        v.push(format!("random:n={n},d=3,den=6,seed={seed}"));
    }
    v
}

pub fn default_corpus() -> Vec<PointSet> {
    default_corpus_specs()
        .iter()
        .map(|s| s.parse::<GeneratorSpec>().and_then(|g| g.generate()).expect("built-in corpus is valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn coords(d: &PointSet) -> Vec<Vec<Rational>> {
        d.points().iter().map(|p| p.coords().to_vec()).collect()
    }

    #[test]
    fn random_one_point_two_residues() {
        for seed in 0..10 {
            let d = gen_random(1, 1, 2, seed).unwrap();
            let x = &d.points()[0].coords()[0];
            assert!(*x == int(0) || *x == rat(1, 2));
        }
        assert_eq!(gen_random(5, 2, 7, 3).unwrap(), gen_random(5, 2, 7, 3).unwrap());
        assert!(gen_random(5, 2, 1, 3).is_err());
    }

    #[test]
    fn korobov_examples() {
        assert_eq!(
            coords(&gen_korobov(4, 1, 1).unwrap()),
            vec![vec![int(0)], vec![rat(1, 4)], vec![rat(1, 2)], vec![rat(3, 4)]]
        );
        assert_eq!(
            coords(&gen_korobov(5, 2, 2).unwrap()),
            vec![
                vec![int(0), int(0)],
                vec![rat(1, 5), rat(2, 5)],
                vec![rat(2, 5), rat(4, 5)],
                vec![rat(3, 5), rat(1, 5)],
                vec![rat(4, 5), rat(3, 5)],
            ]
        );
        assert!(gen_korobov(5, 5, 2).is_err());
    }

    #[test]
    fn radical_inverse_sets() {
        assert_eq!(
            coords(&gen_van_der_corput(4, 2).unwrap()),
            vec![vec![int(0)], vec![rat(1, 2)], vec![rat(1, 4)], vec![rat(3, 4)]]
        );
        assert_eq!(
            coords(&gen_hammersley(2, 2, &[2]).unwrap()),
            vec![vec![int(0), int(0)], vec![rat(1, 2), rat(1, 2)]]
        );
        assert!(gen_hammersley(4, 3, &[2, 4]).is_err());
    }

    #[test]
    fn shift_examples() {
        let d = PointSet::from_rows(1, vec![vec![rat(3, 4)]], "").unwrap();
        let s = apply_shift(&d, &ShiftVector::exact([rat(1, 2)])).unwrap();
        assert_eq!(coords(&s), vec![vec![rat(1, 4)]]);
        assert_eq!(apply_shift(&d, &ShiftVector::zero(1)).unwrap(), d);
        assert!(apply_shift(&d, &ShiftVector::zero(2)).is_err());
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["korobov:n=5,a=2,d=2", "random:n=8,d=2,den=16,seed=1", "vdc:n=8,base=2", "hammersley:n=8,d=3,bases=2+3"] {
            let g: GeneratorSpec = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        assert!("korobov:n=5".parse::<GeneratorSpec>().is_err());
        assert!("sobol:n=5".parse::<GeneratorSpec>().is_err());
    }

    #[test]
    fn range_expansion() {
        let v = GeneratorSpec::expand("korobov:n=5..13,a=2,d=2").unwrap();
        assert_eq!(v.len(), 9);
        assert_eq!(v[0].to_string(), "korobov:n=5,a=2,d=2");
        assert_eq!(v[8].to_string(), "korobov:n=13,a=2,d=2");
    }

    #[test]
    fn corpus_is_valid() {
        let c = default_corpus();
        assert_eq!(c.len(), default_corpus_specs().len());
        assert!(c.iter().all(|d| d.len() <= 16 && d.dim() <= 3));
    }
}
