fn main() {
    let cfg = diffbound_core::verify::SuiteConfig::default();
    let name = std::env::args().nth(1).unwrap_or_else(|| "all".into());
    let start = std::time::Instant::now();
    let r = diffbound_core::verify::run_suite(&name, &cfg).unwrap();
    print!("{}", r.render());
    eprintln!("elapsed: {:?}", start.elapsed());
}
