use nilform::currents::{ch_module_equal, ch_span_contains, parse_ch, ChExpr};
use nilform::ideal::Ideal;
use nilform::parse::parse_poly;
use nilform::*;

fn wclose(r: &Ring, gens: &[ChExpr<Rat>], m: u32) -> Vec<ChExpr<Rat>> {
    let mut out = Vec::new();
    for g in gens {
        for a in 0..m {
            for b in 0..m {
                let w = g.mul_w(&[a, b]);
                if !w.is_zero() { out.push(w); }
            }
        }
    }
    out
}

fn main() {
    let ord = DEFAULT_ORDER;
    let r = Ring::new(&["z1", "z2"], &["w1", "w2"]).unwrap();
    let j = Ideal::new(&r, ["w1^2","w2^2","w1*w2","z1*w2 - z2*w1"].iter().map(|s| parse_poly::<Rat>(&r, s).unwrap()).collect());

    let ba1: Vec<ChExpr<Rat>> = [
        "dz[1]^dw[1,2] * dbar(1/w2)^dbar(1/w1)",
        "dz[2]^dw[1,2] * dbar(1/w2)^dbar(1/w1)",
        "(z2*w1 + z1*w2) * dz[2]^dw[1,2] * dbar(1/w2^2)^dbar(1/w1^2) + w1*w2 * dz[1,2]^dw[2] * dbar(1/w2^2)^dbar(1/w1^2)",
        "(z2*w1 + z1*w2) * dz[1]^dw[1,2] * dbar(1/w2^2)^dbar(1/w1^2) + w1*w2 * dz[1,2]^dw[1] * dbar(1/w2^2)^dbar(1/w1^2)",
        "z2 * dz[1,2]^dw[1] * dbar(1/w2)^dbar(1/w1) - z1 * dz[1,2]^dw[2] * dbar(1/w2)^dbar(1/w1)",
    ].iter().map(|s| parse_ch(&r, s).unwrap()).collect();

    let ba0: Vec<ChExpr<Rat>> = [
        "dw[1,2] * dbar(1/w2)^dbar(1/w1)",
        "(z2*w1 + z1*w2) * dw[1,2] * dbar(1/w2^2)^dbar(1/w1^2) + w1*w2 * dz[2]^dw[1] * dbar(1/w2^2)^dbar(1/w1^2) - w1*w2 * dz[1]^dw[2] * dbar(1/w2^2)^dbar(1/w1^2)",
        "z1 * dz[1]^dw[2] * dbar(1/w2)^dbar(1/w1) - z2 * dz[1]^dw[1] * dbar(1/w2)^dbar(1/w1)",
        "z1 * dz[2]^dw[2] * dbar(1/w2)^dbar(1/w1) - z2 * dz[2]^dw[1] * dbar(1/w2)^dbar(1/w1)",
    ].iter().map(|s| parse_ch(&r, s).unwrap()).collect();

    for (p, paper) in [(1usize, &ba1), (2usize, &ba0)] {
        let data = nilform::barlet::barlet_generators(&j, p, ord).unwrap();
        let plain = ch_module_equal(&r, &data.generators, paper, ord);
        let closed = wclose(&r, paper, 2);
        let withw = ch_module_equal(&r, &data.generators, &closed, ord);
        println!("p={p}: plain z-span equality: {plain}; w-closed equality: {withw}");
        if !plain {
            for (i, g) in data.generators.iter().enumerate() {
                if !ch_span_contains(&r, paper, g, ord) {
                    println!("  mine[{i}] not in plain paper span: {}", g.render(ord));
                }
            }
            for (i, g) in paper.iter().enumerate() {
                if !ch_span_contains(&r, &data.generators, g, ord) {
                    println!("  paper[{i}] not in my span");
                }
            }
        }
    }
}
