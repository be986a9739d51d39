use cablekh::braid::braid_closure;
use cablekh::cable::seifert_framed_cable;
use cablekh::diagram::LinkDiagram;
use cablekh::homology::scan_compute;

fn main() {
    let trefoil_pd = LinkDiagram::parse("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]").unwrap();
    let trefoil_braid = braid_closure(2, &[1, 1, 1]).unwrap();
    let mirror = trefoil_pd.mirror();

    for (name, d) in [
        ("trefoil (table PD)", trefoil_pd.clone()),
        ("trefoil (braid PD)", trefoil_braid),
        ("trefoil mirror", mirror),
    ] {
        let d = d.with_default_basepoint();
        let c = seifert_framed_cable(&d, 2).unwrap();
        let t0 = std::time::Instant::now();
        let unred = scan_compute(&c, false, 1 << 22).unwrap();
        println!(
            "{name}: cable {}x, unreduced total {} ({:?})",
            c.num_crossings(),
            unred.total(),
            t0.elapsed()
        );
        println!("  {}", unred.poincare_string());
    }
}
