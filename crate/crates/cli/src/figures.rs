//! Plot analogues of the published figures, regenerated from fresh runs.

use walshctl_core::hw::{run_pipeline, RademacherGenerator};
use walshctl_core::sid::Divisor;
use walshctl_core::walsh::{sample_grid, PaleyIndex, Variant};

use crate::commands::{build_noise, run_sid, scope_figure, Failure, Output};
use crate::config::{NoiseSpec, RunConfig};
use crate::svg::{Figure, Panel, Series};

/// First eight Walsh functions in Paley order, both conventions.
fn walsh_family() -> Result<Figure, Failure> {
    let mut fig = Figure::new("Walsh functions W_0 .. W_7 (Paley order)", "slot on the 2^3 grid");
    for l in 0..8u8 {
        let idx = PaleyIndex::from_u8(l);
        let bar = sample_grid(idx, 3, Variant::Standard)?;
        let plain = sample_grid(idx, 3, Variant::Complement)?;
        let to_f = |b: &[u8]| b.iter().map(|&x| f64::from(x)).collect::<Vec<_>>();
        fig = fig.panel(Panel::new(
            format!("l = {l}"),
            vec![
                Series::steps(format!("Wbar_{l}"), &to_f(bar.bits())),
                Series::steps(format!("W_{l}"), &to_f(plain.bits())),
            ],
        ));
    }
    Ok(fig)
}

/// Counter outputs of the hardware Rademacher Generator over one pass.
fn rademacher_outputs(expansion: u8) -> Figure {
    let orders = 4;
    let mut gen = RademacherGenerator::new(orders, u32::from(expansion));
    let mut rows = vec![Vec::new(); orders as usize];
    for _ in 0..gen.pass_length() {
        for (j, row) in rows.iter_mut().enumerate() {
            row.push(f64::from(gen.bit(j as u32)));
        }
        gen.tick();
    }
    let mut fig = Figure::new(format!("Rademacher Generator outputs, expansion {expansion}"), "clock cycle");
    for (j, row) in rows.iter().enumerate() {
        fig = fig.panel(Panel::new(format!("R_{j}"), vec![Series::steps(format!("R_{j}"), row)]));
    }
    fig
}

pub fn figures(cfg: &RunConfig) -> Result<Output, Failure> {
    let mut out = Output::default();
    out.push_svg("fig1a_walsh.svg", &walsh_family()?);
    out.push_svg("fig2_rademacher.svg", &rademacher_outputs(cfg.pipeline.timing.t1));

    let p = &cfg.pipeline;
    let run = run_pipeline(p.timing, p.modulation, p.synth.clone())?;
    out.push_svg("fig3_scope.svg", &scope_figure(&run));

    // random noise is widened to 32 terms so the finer basis has detail to
    // resolve; both reconstructions share one divisor so their LSB scales agree
    let mut s = cfg.sid.clone();
    if let NoiseSpec::WalshBand { terms, .. } = &mut s.noise {
        *terms = (*terms).max(32);
    }
    let s = &s;
    let noise = build_noise(s)?;
    let d = Divisor::new(s.divisor.value().max(32)).map_err(Failure::from)?;
    let coarse = run_sid(s, &noise, 16, d)?;
    let fine = run_sid(s, &noise, 32, d)?;
    let fig = crate::commands::reconstruction_figure(&[(16, &coarse), (32, &fine)])?;
    out.push_svg("fig4_sid.svg", &fig);

    let m16 = coarse.run.metrics.ok_or_else(|| Failure::Invariant("metrics missing".into()))?;
    let m32 = fine.run.metrics.ok_or_else(|| Failure::Invariant("metrics missing".into()))?;
    out.summary =
        format!("4 figures; SID at D = {}: L2 {:.3} LSB (N=16), {:.3} LSB (N=32)\n", d.value(), m16.l2_lsb, m32.l2_lsb);
    Ok(out)
}
