fn main() {
    let cfg = ribbonpoly::verify::SuiteConfig::small(ribbonpoly::verify::DEFAULT_SEED);
    for r in ribbonpoly::verify::run_all(&cfg) { println!("{}", r.summary()); for n in &r.notes { println!("  {n}"); } for f in r.failures.iter().take(3) { println!("  ! {f}"); } }
}
