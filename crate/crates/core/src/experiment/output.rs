//! CSV and manifest emission.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path as FsPath;

use super::runner::ExperimentResult;
use crate::graph::Path;

/// C-style `%.10g`.
pub fn format_g(x: f64) -> String {
    const PRECISION: i32 = 10;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PRECISION).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        trim_fraction(&format!("{:.*}", (PRECISION - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Edge indices joined by `-`.
pub fn path_label(path: &Path) -> String {
    path.edges.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("-")
}

fn create(dir: &FsPath, name: &str) -> io::Result<BufWriter<fs::File>> {
    Ok(BufWriter::new(fs::File::create(dir.join(name))?))
}

pub fn write_regret<W: Write>(result: &ExperimentResult, mut out: W) -> io::Result<()> {
    writeln!(out, "agent,repetition,t,instant,cumulative,std_error,path")?;
    for tr in &result.traces {
        for s in &tr.steps {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                tr.agent,
                tr.repetition,
                s.t,
                format_g(s.instant),
                format_g(s.cumulative),
                format_g(s.std_error),
                path_label(&s.path)
            )?;
        }
    }
    Ok(())
}

pub fn write_summary<W: Write>(result: &ExperimentResult, mut out: W) -> io::Result<()> {
    writeln!(out, "agent,T,mean,sd")?;
    for s in &result.summaries {
        writeln!(out, "{},{},{},{}", s.agent, s.horizon(), format_g(s.final_mean()), format_g(s.final_sd()))?;
    }
    Ok(())
}

pub fn write_curves<W: Write>(result: &ExperimentResult, mut out: W) -> io::Result<()> {
    writeln!(out, "agent,t,mean,sd")?;
    for s in &result.summaries {
        for (t, (m, sd)) in s.mean.iter().zip(&s.sd).enumerate() {
            writeln!(out, "{},{},{},{}", s.agent, t + 1, format_g(*m), format_g(*sd))?;
        }
    }
    Ok(())
}

/// Edge visit counts summed over repetitions.
pub fn write_visits<W: Write>(result: &ExperimentResult, mut out: W) -> io::Result<()> {
    writeln!(out, "agent,edge_index,tail,head,count")?;
    let graph = &result.network.graph;
    for s in &result.summaries {
        let mut counts = vec![0u64; graph.edge_count()];
        for tr in result.traces.iter().filter(|tr| tr.agent == s.agent) {
            for (c, v) in counts.iter_mut().zip(&tr.visit_counts) {
                *c += v;
            }
        }
        for (e, c) in counts.iter().enumerate() {
            let edge = graph.edge(e);
            let (tail, head) = (result.network.vertex_name(edge.tail), result.network.vertex_name(edge.head));
            writeln!(out, "{},{e},{tail},{head},{c}", s.agent)?;
        }
    }
    Ok(())
}

pub fn write_manifest<W: Write>(result: &ExperimentResult, mut out: W) -> io::Result<()> {
    let net = &result.network;
    writeln!(out, "# {} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))?;
    write!(out, "{}", result.config.to_text())?;
    writeln!(out, "# resolved")?;
    writeln!(out, "source_vertex = {}", net.vertex_name(result.source))?;
    writeln!(out, "target_vertex = {}", net.vertex_name(result.target))?;
    writeln!(out, "vertices = {}", net.graph.vertex_count())?;
    writeln!(out, "edges = {}", net.graph.edge_count())?;
    let unusable: Vec<String> = result.unusable_edges.iter().map(|e| e.to_string()).collect();
    writeln!(out, "unusable_edges = {}", unusable.join(","))?;
    writeln!(out, "init_cover_paths = {}", result.cover_size)?;
    writeln!(out, "# sub-seeds: environment per repetition, then agent per repetition")?;
    for (rep, seed) in result.environment_seeds.iter().enumerate() {
        writeln!(out, "seed.environment.{rep} = {seed}")?;
    }
    for (agent, rep, seed) in &result.agent_seeds {
        writeln!(out, "seed.{agent}.{rep} = {seed}")?;
    }
    Ok(())
}

/// Writes every output file into `dir`, creating it if needed.
pub fn write_all(result: &ExperimentResult, dir: &FsPath) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut w = create(dir, "regret.csv")?;
    write_regret(result, &mut w)?;
    w.flush()?;
    let mut w = create(dir, "summary.csv")?;
    write_summary(result, &mut w)?;
    w.flush()?;
    let mut w = create(dir, "curves.csv")?;
    write_curves(result, &mut w)?;
    w.flush()?;
    let mut w = create(dir, "visits.csv")?;
    write_visits(result, &mut w)?;
    w.flush()?;
    let mut w = create(dir, "manifest.txt")?;
    write_manifest(result, &mut w)?;
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (150.0, "150"),
            (70.71067811865476, "70.71067812"),
            (1.0 / 3.0, "0.3333333333"),
            (1e-4, "0.0001"),
            (1.5e-5, "1.5e-05"),
            (12345678901.0, "1.23456789e+10"),
            (9999999999.5, "1e+10"),
            (1234567890.0, "1234567890"),
            (123.456e100, "1.23456e+102"),
            (f64::INFINITY, "inf"),
        ];
        for (x, want) in cases {
            assert_eq!(format_g(x), want, "{x}");
        }
    }

    #[test]
    fn path_labels() {
        assert_eq!(path_label(&Path::new(0, 1, vec![3, 0, 12])), "3-0-12");
    }
}
