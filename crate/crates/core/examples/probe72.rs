use nilform::*;
use nilform::ideal::Ideal;
use nilform::parse::parse_poly;

fn main() {
    let ord = DEFAULT_ORDER;
    let r = Ring::new(&["z1", "z2"], &["w1", "w2"]).unwrap();
    let j = Ideal::new(&r, ["w1^2","w2^2","w1*w2","z1*w2 - z2*w1"].iter().map(|s| parse_poly::<Rat>(&r, s).unwrap()).collect());
    for p in [1usize, 2] {
        let t0 = std::time::Instant::now();
        let data = nilform::barlet::barlet_generators(&j, p, ord).unwrap();
        println!("== p = {p}: {} generators in {:?}", data.generators.len(), t0.elapsed());
        for g in &data.generators {
            println!("   {}", g.render(ord));
        }
        println!("   resolution ranks {:?} m={} m_op={}", data.resolution.ranks(), data.m_nss, data.m_op);
    }
}
