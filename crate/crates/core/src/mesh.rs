//! Grid sampling of an immersion and OBJ / CSV export.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::domain::{linspace, Rect};
use crate::enneper::{EnneperError, Immersion};
use crate::numfmt::g12;

/// Grid dimensions `NxM`: `N` samples in `u`, `M` in `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Grid {
    pub nu: usize,
    pub nv: usize,
}

impl FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> Result<Grid, String> {
        let bad = || format!("grid must look like NxM with N, M >= 2, got '{s}'");
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let nu: usize = a.trim().parse().map_err(|_| bad())?;
        let nv: usize = b.trim().parse().map_err(|_| bad())?;
        if nu < 2 || nv < 2 {
            return Err(bad());
        }
        Ok(Grid { nu, nv })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.nu, self.nv)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Obj,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Format, String> {
        match s {
            "obj" => Ok(Format::Obj),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format '{s}', expected obj or csv")),
        }
    }
}

/// Sampled surface on a `nu x nv` grid of chart points.
///
/// Grid node `(i, j)` sits at `(u_i, v_j)` and has slot `j * nu + i`.
/// Vertices are numbered in slot order, skipping masked nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshBuffer {
    pub grid: Grid,
    pub params: Vec<(f64, f64)>,
    /// `None` for nodes outside the domain.
    pub points: Vec<Option<[f64; 3]>>,
    pub vertices: Vec<[f64; 3]>,
    /// 1-based vertex indices, counter-clockwise in `(u, v)`.
    pub faces: Vec<[usize; 4]>,
}

impl MeshBuffer {
    pub fn masked(&self) -> usize {
        self.points.iter().filter(|p| p.is_none()).count()
    }

    pub fn to_obj(&self) -> String {
        let mut o = String::new();
        for v in &self.vertices {
            let _ = writeln!(o, "v {} {} {}", g12(v[0]), g12(v[1]), g12(v[2]));
        }
        for f in &self.faces {
            let _ = writeln!(o, "f {} {} {} {}", f[0], f[1], f[2], f[3]);
        }
        o
    }

    pub fn to_csv(&self) -> String {
        let mut o = String::from("u,v,x1,x2,x3\n");
        for (&(u, v), p) in self.params.iter().zip(&self.points) {
            if let Some(x) = p {
                let _ = writeln!(o, "{},{},{},{},{}", g12(u), g12(v), g12(x[0]), g12(x[1]), g12(x[2]));
            }
        }
        o
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Obj => self.to_obj(),
            Format::Csv => self.to_csv(),
        }
    }
}

/// Samples `psi` on an evenly spaced grid over `rect`, corners included.
/// Nodes the domain does not admit are masked, as is every cell touching one.
pub fn sample(psi: &Immersion, rect: Rect, grid: Grid) -> Result<MeshBuffer, EnneperError> {
    let us = linspace(rect.u_min, rect.u_max, grid.nu);
    let vs = linspace(rect.v_min, rect.v_max, grid.nv);
    let alg = psi.character.algebra();
    let rows: Vec<Vec<Option<[f64; 3]>>> = vs
        .par_iter()
        .map(|&v| {
            us.iter()
                .map(|&u| if psi.domain.admits(alg, u, v) { psi.eval(u, v).map(Some) } else { Ok(None) })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let points: Vec<Option<[f64; 3]>> = rows.into_iter().flatten().collect();
    let params: Vec<(f64, f64)> = vs.iter().flat_map(|&v| us.iter().map(move |&u| (u, v))).collect();

    let mut index = vec![0usize; points.len()];
    let mut vertices = Vec::new();
    for (k, p) in points.iter().enumerate() {
        if let Some(x) = p {
            vertices.push(*x);
            index[k] = vertices.len();
        }
    }
    let mut faces = Vec::new();
    for j in 0..grid.nv - 1 {
        for i in 0..grid.nu - 1 {
            let slot = |i: usize, j: usize| j * grid.nu + i;
            let quad = [slot(i, j), slot(i + 1, j), slot(i + 1, j + 1), slot(i, j + 1)];
            if quad.iter().all(|&k| index[k] > 0) {
                faces.push(quad.map(|k| index[k]));
            }
        }
    }
    Ok(MeshBuffer { grid, params, points, vertices, faces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{DomainSpec, Exclusion};
    use crate::enneper::CausalCharacter;
    use crate::expr::real::RealExpr;

    fn plane(domain: DomainSpec) -> Immersion {
        let coords = ["u", "v", "0"].map(|s| RealExpr::parse(s, &["u", "v"]).unwrap());
        Immersion::parametric(CausalCharacter::Spacelike, domain, coords)
    }

    #[test]
    fn grid_parse() {
        assert_eq!("64x32".parse::<Grid>().unwrap(), Grid { nu: 64, nv: 32 });
        assert!("1x5".parse::<Grid>().is_err());
        assert!("axb".parse::<Grid>().is_err());
    }

    #[test]
    fn full_grid_counts() {
        let r = Rect::new(0.0, 1.0, 0.0, 2.0);
        let m = sample(&plane(DomainSpec::rect(r)), r, Grid { nu: 3, nv: 4 }).unwrap();
        assert_eq!((m.vertices.len(), m.faces.len(), m.masked()), (12, 6, 0));
        assert_eq!(m.faces[0], [1, 2, 5, 4]);
        let obj = m.to_obj();
        assert!(obj.starts_with("v 0 0 0\nv 0.5 0 0\n"));
        assert_eq!(m.to_csv().lines().count(), 13);
    }

    #[test]
    fn masked_cells_are_dropped() {
        let r = Rect::new(-1.0, 1.0, -1.0, 1.0);
        let mut d = DomainSpec::rect(r);
        d.exclusions.push(Exclusion::AxisU);
        d.basepoint = (0.5, 0.5);
        let m = sample(&plane(d), r, Grid { nu: 3, nv: 3 }).unwrap();
        // The middle column u = 0 lies on the excluded axis.
        assert_eq!(m.masked(), 3);
        assert!(m.faces.is_empty());
        for f in &m.faces {
            assert!(f.iter().all(|&k| k >= 1 && k <= m.vertices.len()));
        }
    }
}
