//! OBJ, binary STL and CSV writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::mesh::{Mesh3, Mesh4};

/// Header line of the CSV vertex dump.
pub const CSV_HEADER: &str = "t,s,x,y,z,w";

pub fn write_obj<W: Write>(mesh: &Mesh3, out: &mut W) -> std::io::Result<()> {
    for v in &mesh.vertices {
        writeln!(out, "v {} {} {}", v[0], v[1], v[2])?;
    }
    for q in &mesh.quads {
        writeln!(out, "f {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1)?;
    }
    Ok(())
}

/// Splits each quad along its shorter diagonal.
pub fn triangles(mesh: &Mesh3) -> Vec<[usize; 3]> {
    let d2 = |a: usize, b: usize| {
        let (p, q) = (mesh.vertices[a], mesh.vertices[b]);
        (0..3).map(|k| (p[k] - q[k]).powi(2)).sum::<f64>()
    };
    let mut out = Vec::with_capacity(2 * mesh.quads.len());
    for &[a, b, c, d] in &mesh.quads {
        if d2(a, c) <= d2(b, d) {
            out.push([a, b, c]);
            out.push([a, c, d]);
        } else {
            out.push([a, b, d]);
            out.push([b, c, d]);
        }
    }
    out
}

pub fn write_stl<W: Write>(mesh: &Mesh3, out: &mut W) -> std::io::Result<()> {
    let tris = triangles(mesh);
    out.write_all(&[0u8; 80])?;
    out.write_all(&(tris.len() as u32).to_le_bytes())?;
    for t in tris {
        let [a, b, c] = t.map(|i| mesh.vertices[i]);
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let mut n = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if len > 0.0 {
            n = n.map(|x| x / len);
        }
        for p in [n, a, b, c] {
            for x in p {
                out.write_all(&(x as f32).to_le_bytes())?;
            }
        }
        out.write_all(&0u16.to_le_bytes())?;
    }
    Ok(())
}

/// One row per vertex; values round-trip exactly through `str::parse`.
pub fn write_csv<W: Write>(mesh: &Mesh4, out: &mut W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for (p, v) in mesh.params.iter().zip(&mesh.vertices) {
        writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", p[0], p[1], v[0], v[1], v[2], v[3])?;
    }
    Ok(())
}

/// `(params, vertices)` rows of a 4D mesh CSV.
pub type CsvRows = (Vec<[f64; 2]>, Vec<[f64; 4]>);

/// Parses a CSV written by [`write_csv`].
pub fn read_csv(text: &str) -> Result<CsvRows> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Invalid(format!("CSV header must be `{CSV_HEADER}`")));
    }
    let mut params = Vec::new();
    let mut verts = Vec::new();
    for (n, line) in lines.enumerate() {
        let vals: std::result::Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
        let vals = vals.map_err(|e| Error::Invalid(format!("CSV line {}: {e}", n + 2)))?;
        if vals.len() != 6 {
            return Err(Error::Invalid(format!("CSV line {} has {} fields", n + 2, vals.len())));
        }
        params.push([vals[0], vals[1]]);
        verts.push([vals[2], vals[3], vals[4], vals[5]]);
    }
    Ok((params, verts))
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    let wrap = |source| Error::Io { path: path.into(), source };
    let mut w = BufWriter::new(File::create(path).map_err(wrap)?);
    body(&mut w).map_err(wrap)?;
    w.flush().map_err(wrap)
}

pub fn export_obj(mesh: &Mesh3, path: &Path) -> Result<()> {
    write_file(path, |w| write_obj(mesh, w))
}

pub fn export_stl(mesh: &Mesh3, path: &Path) -> Result<()> {
    write_file(path, |w| write_stl(mesh, w))
}

pub fn export_csv(mesh: &Mesh4, path: &Path) -> Result<()> {
    write_file(path, |w| write_csv(mesh, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Mesh;

    fn unit_square() -> Mesh3 {
        let params = vec![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]];
        let verts = params.iter().map(|p| [p[0], p[1], 0.0]).collect();
        Mesh::grid(2, 2, params, verts, false, false)
    }

    #[test]
    fn obj_of_unit_square() {
        let mut buf = Vec::new();
        write_obj(&unit_square(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).collect::<Vec<_>>(), vec!["f 1 3 4 2"]);
    }

    #[test]
    fn stl_layout() {
        let mut buf = Vec::new();
        write_stl(&unit_square(), &mut buf).unwrap();
        assert_eq!(buf.len(), 80 + 4 + 2 * 50);
        assert!(buf[..80].iter().all(|&b| b == 0));
        assert_eq!(u32::from_le_bytes(buf[80..84].try_into().unwrap()), 2);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let params = vec![[0.1, 1.0 / 3.0], [std::f64::consts::PI, -2.5e-300]];
        let verts = vec![[1e300, -0.0, 7.0 / 11.0, f64::MIN_POSITIVE], [1.0, 2.0, 3.0, 4.0]];
        let m: Mesh4 = Mesh::grid(2, 1, params.clone(), verts.clone(), false, false);
        let mut buf = Vec::new();
        write_csv(&m, &mut buf).unwrap();
        let (p, v) = read_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(p, params);
        assert_eq!(
            v.iter().map(|x| x.map(f64::to_bits)).collect::<Vec<_>>(),
            verts.iter().map(|x| x.map(f64::to_bits)).collect::<Vec<_>>()
        );
    }
}
