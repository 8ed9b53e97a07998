use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A permutation of `0..degree`, stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `self` followed by `other`: the point `i` goes to `other(self(i))`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn is_even(&self) -> bool {
        let mut seen = vec![false; self.degree()];
        let mut transpositions = 0;
        for start in 0..self.degree() {
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        transpositions % 2 == 0
    }

    fn pad(&self, degree: usize) -> Permutation {
        let mut v = self.0.clone();
        v.extend(self.degree()..degree);
        Permutation(v)
    }

    /// Parses cycle notation over 1-based points, e.g. `(1 2 3)(4 5)`. The
    /// empty string and `()` denote the identity.
    pub fn parse_cycles(s: &str) -> Result<Self> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| Error::parse(s, "expected a parenthesised cycle"))?;
            let points = inner
                .0
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| match t.parse::<usize>() {
                    Ok(p) if p >= 1 => Ok(p - 1),
                    _ => Err(Error::parse(t, "points are positive integers")),
                })
                .collect::<Result<Vec<_>>>()?;
            cycles.push(points);
            rest = inner.1.trim_start();
        }
        let degree = cycles.iter().flatten().map(|&p| p + 1).max().unwrap_or(0);
        let mut image: Vec<usize> = (0..degree).collect();
        let mut moved = vec![false; degree];
        for cycle in &cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if moved[p] && cycle.len() > 1 {
                    return Err(Error::parse(
                        s,
                        format!("point {} appears in two cycles", p + 1),
                    ));
                }
                moved[p] = cycle.len() > 1;
                image[p] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Permutation(image))
    }

    pub fn to_cycles(&self) -> String {
        let mut seen = vec![false; self.degree()];
        let mut out = String::new();
        for start in 0..self.degree() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            out.push('(');
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    out.push(' ');
                }
                out.push_str(&(i + 1).to_string());
                first = false;
                i = self.0[i];
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }

    pub(crate) fn common_degree(perms: &[Permutation]) -> Vec<Permutation> {
        let d = perms.iter().map(Permutation::degree).max().unwrap_or(0);
        perms.iter().map(|p| p.pad(d)).collect()
    }
}

/// A group described in the specification mini-language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    /// Direct product of cyclic groups of the listed orders.
    Abelian(Vec<usize>),
    /// Dihedral group of order `2n`.
    Dihedral(usize),
    /// Dicyclic group of the given order (a multiple of 4, at least 8);
    /// `quat:8` is the quaternion group.
    Quaternion(usize),
    Symmetric(usize),
    Alternating(usize),
    Permutations(Vec<Permutation>),
    Cayley(PathBuf),
}

fn parse_usize(token: &str) -> Result<usize> {
    token
        .trim()
        .parse()
        .map_err(|_| Error::parse(token, "expected a non-negative integer"))
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::parse(s, "expected `<family>:<argument>`"))?;
        let spec = match kind {
            "ab" => {
                let factors = arg
                    .split(',')
                    .map(parse_usize)
                    .collect::<Result<Vec<_>>>()?;
                if factors.contains(&0) {
                    return Err(Error::parse(s, "cyclic factors must be positive"));
                }
                GroupSpec::Abelian(factors)
            }
            "dih" => match parse_usize(arg)? {
                0 => return Err(Error::parse(s, "dihedral parameter must be positive")),
                n => GroupSpec::Dihedral(n),
            },
            "quat" => match parse_usize(arg)? {
                n if n >= 8 && n % 4 == 0 => GroupSpec::Quaternion(n),
                _ => {
                    return Err(Error::parse(
                        s,
                        "quaternion order must be a multiple of 4, at least 8",
                    ))
                }
            },
            "sym" => match parse_usize(arg)? {
                n @ 1..=5 => GroupSpec::Symmetric(n),
                _ => {
                    return Err(Error::parse(
                        s,
                        "symmetric groups are supported for 1 <= n <= 5",
                    ))
                }
            },
            "alt" => match parse_usize(arg)? {
                n @ 1..=5 => GroupSpec::Alternating(n),
                _ => {
                    return Err(Error::parse(
                        s,
                        "alternating groups are supported for 1 <= n <= 5",
                    ))
                }
            },
            "perm" => {
                let gens = arg
                    .split(';')
                    .map(Permutation::parse_cycles)
                    .collect::<Result<Vec<_>>>()?;
                GroupSpec::Permutations(gens)
            }
            "cayley" => {
                if arg.is_empty() {
                    return Err(Error::parse(s, "missing path"));
                }
                GroupSpec::Cayley(PathBuf::from(arg))
            }
            other => return Err(Error::parse(other, "unknown group family")),
        };
        Ok(spec)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Abelian(d) => {
                let parts: Vec<String> = d.iter().map(usize::to_string).collect();
                write!(f, "ab:{}", parts.join(","))
            }
            GroupSpec::Dihedral(n) => write!(f, "dih:{n}"),
            GroupSpec::Quaternion(n) => write!(f, "quat:{n}"),
            GroupSpec::Symmetric(n) => write!(f, "sym:{n}"),
            GroupSpec::Alternating(n) => write!(f, "alt:{n}"),
            GroupSpec::Permutations(gens) => {
                let parts: Vec<String> = gens.iter().map(Permutation::to_cycles).collect();
                write!(f, "perm:{}", parts.join(";"))
            }
            GroupSpec::Cayley(p) => write!(f, "cayley:{}", p.display()),
        }
    }
}

/// Splits a comma-separated list of group specs. Tokens without a `:` continue
/// the previous spec, so `ab:2,4,sym:3` yields `ab:2,4` and `sym:3`.
pub fn parse_group_list(s: &str) -> Result<Vec<GroupSpec>> {
    let mut raw: Vec<String> = Vec::new();
    for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match raw.last_mut() {
            Some(prev) if !token.contains(':') => {
                prev.push(',');
                prev.push_str(token);
            }
            _ => raw.push(token.to_string()),
        }
    }
    raw.iter().map(|t| t.parse()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_round_trip() {
        let p = Permutation::parse_cycles("(1 2 3)(4 5)").unwrap();
        assert_eq!(p.0, vec![1, 2, 0, 4, 3]);
        assert_eq!(p.to_cycles(), "(1 2 3)(4 5)");
        assert!(!p.is_even());
        assert_eq!(Permutation::parse_cycles("()").unwrap().to_cycles(), "()");
    }

    #[test]
    fn group_list_splitting() {
        let list = parse_group_list("ab:2,4,sym:3,dih:4").unwrap();
        assert_eq!(
            list,
            vec![
                GroupSpec::Abelian(vec![2, 4]),
                GroupSpec::Symmetric(3),
                GroupSpec::Dihedral(4)
            ]
        );
    }

    #[test]
    fn bad_specs_report_token() {
        match "foo:3".parse::<GroupSpec>() {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "foo"),
            other => panic!("{other:?}"),
        }
        assert!("sym:7".parse::<GroupSpec>().is_err());
        assert!("quat:6".parse::<GroupSpec>().is_err());
        assert!("perm:(1 2)(2 3)".parse::<GroupSpec>().is_err());
        assert!("ab:2,x".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "ab:2,4",
            "dih:5",
            "quat:8",
            "sym:4",
            "alt:5",
            "perm:(1 2 3);(1 2)",
        ] {
            assert_eq!(s.parse::<GroupSpec>().unwrap().to_string(), s);
        }
    }
}
