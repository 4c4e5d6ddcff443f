//! Field serialization.
//!
//! Binary layout, all little-endian: `L: f64`, `n: u64`, `stagger: f64`, then
//! `n * n` pairs `(re: f64, im: f64)` in row-major order.

use std::io::{Read, Write};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;

use super::{ComplexField, Grid, STAGGER};
use crate::{Error, Result};

pub fn write_binary<W: Write>(field: &ComplexField, mut out: W) -> Result<()> {
    let grid = field.grid();
    out.write_f64::<LittleEndian>(grid.half_width())?;
    out.write_u64::<LittleEndian>(grid.n() as u64)?;
    out.write_f64::<LittleEndian>(STAGGER)?;
    for v in field.values() {
        out.write_f64::<LittleEndian>(v.re)?;
        out.write_f64::<LittleEndian>(v.im)?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut input: R) -> Result<ComplexField> {
    let half_width = input.read_f64::<LittleEndian>()?;
    let n = input.read_u64::<LittleEndian>()? as usize;
    let stagger = input.read_f64::<LittleEndian>()?;
    if stagger != STAGGER {
        return Err(Error::InvalidGrid(format!("unsupported stagger {stagger}")));
    }
    let grid = Grid::new(half_width, n)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = input.read_f64::<LittleEndian>()?;
        let im = input.read_f64::<LittleEndian>()?;
        values.push(Complex64::new(re, im));
    }
    ComplexField::from_values(grid, values)
}

/// One line per sample: `x,y,re,im`.
pub fn write_csv<W: Write>(field: &ComplexField, mut out: W) -> Result<()> {
    writeln!(out, "x,y,re,im")?;
    for (i, z) in field.grid().points() {
        let v = field.values()[i];
        writeln!(out, "{},{},{},{}", z.re, z.im, v.re, v.im)?;
    }
    Ok(())
}
