//! VTK density fields and STL obstacle surfaces.

use crate::lattice::Block;
use std::collections::BTreeMap;
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExportError {
    #[error("position {position:?} is outside a lattice of dimensions {dims:?}")]
    PositionOutOfRange { position: Vec<usize>, dims: Vec<usize> },
}

/// Legacy ASCII VTK structured points with one `density` scalar per cell,
/// x fastest. 2D lattices get a single z layer; missing cells are zero.
pub fn export_vtk(density: &BTreeMap<Vec<usize>, f64>, dims: &[usize]) -> Result<Vec<u8>, ExportError> {
    let extent = [
        dims.first().copied().unwrap_or(1),
        dims.get(1).copied().unwrap_or(1),
        dims.get(2).copied().unwrap_or(1),
    ];
    let total: usize = extent.iter().product();
    let mut values = vec![0.0f64; total];
    for (position, &value) in density {
        if position.len() != dims.len() || position.iter().zip(dims).any(|(&p, &n)| p >= n) {
            return Err(ExportError::PositionOutOfRange {
                position: position.clone(),
                dims: dims.to_vec(),
            });
        }
        let index = position.iter().zip(dims).rev().fold(0, |acc, (&p, &n)| acc * n + p);
        values[index] = value;
    }
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\n");
    out.push_str("qlbw density\n");
    out.push_str("ASCII\n");
    out.push_str("DATASET STRUCTURED_POINTS\n");
    let _ = writeln!(out, "DIMENSIONS {} {} {}", extent[0], extent[1], extent[2]);
    out.push_str("ORIGIN 0 0 0\n");
    out.push_str("SPACING 1 1 1\n");
    let _ = writeln!(out, "POINT_DATA {total}");
    out.push_str("SCALARS density float 1\n");
    out.push_str("LOOKUP_TABLE default\n");
    let line: Vec<String> = values.iter().map(f64::to_string).collect();
    out.push_str(&line.join(" "));
    out.push('\n');
    Ok(out.into_bytes())
}

type Vec3 = [f64; 3];

/// Corners of the cuboid covering the block's cells; 2D blocks span z ∈ [0, 1].
fn cuboid(block: &Block) -> (Vec3, Vec3) {
    let mut lo = [0.0; 3];
    let mut hi = [1.0; 3];
    for (k, &(a, b)) in block.bounds.iter().enumerate().take(3) {
        lo[k] = a as f64;
        hi[k] = (b + 1) as f64;
    }
    (lo, hi)
}

/// Two triangles per face, wound counter-clockwise seen from outside.
fn cuboid_facets(lo: Vec3, hi: Vec3) -> Vec<(Vec3, [Vec3; 3])> {
    let mut facets = Vec::with_capacity(12);
    for axis in 0..3 {
        let (u, v) = ((axis + 1) % 3, (axis + 2) % 3);
        for upper in [false, true] {
            let mut normal = [0.0; 3];
            normal[axis] = if upper { 1.0 } else { -1.0 };
            let corner = |a: bool, b: bool| {
                let mut p = [0.0; 3];
                p[axis] = if upper { hi[axis] } else { lo[axis] };
                p[u] = if a { hi[u] } else { lo[u] };
                p[v] = if b { hi[v] } else { lo[v] };
                p
            };
            // (u, v, axis) is right-handed, so u→v turns counter-clockwise about +axis.
            let quad = [corner(false, false), corner(true, false), corner(true, true), corner(false, true)];
            let [q0, q1, q2, q3] = if upper { quad } else { [quad[0], quad[3], quad[2], quad[1]] };
            facets.push((normal, [q0, q1, q2]));
            facets.push((normal, [q0, q2, q3]));
        }
    }
    facets
}

/// ASCII STL with twelve outward-facing triangles per block.
pub fn export_stl(blocks: &[Block]) -> Vec<u8> {
    let mut out = String::from("solid qlbw\n");
    for block in blocks {
        let (lo, hi) = cuboid(block);
        for (n, tri) in cuboid_facets(lo, hi) {
            let _ = writeln!(out, "  facet normal {} {} {}", n[0], n[1], n[2]);
            out.push_str("    outer loop\n");
            for p in tri {
                let _ = writeln!(out, "      vertex {} {} {}", p[0], p[1], p[2]);
            }
            out.push_str("    endloop\n");
            out.push_str("  endfacet\n");
        }
    }
    out.push_str("endsolid qlbw\n");
    out.into_bytes()
}
