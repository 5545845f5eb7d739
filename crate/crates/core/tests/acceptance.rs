use rackhom_core::suite::{run_criterion, SuiteConfig};

fn main() {
    let cfg = SuiteConfig { timing: true, ..SuiteConfig::default() };
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = (1..=11)
            .map(|id| {
                s.spawn({
                    let cfg = &cfg;
                    move || run_criterion(id, cfg)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = Vec::new();
    for r in &results {
        let status = if r.ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {} ({:.2}s)", r.id, r.title, r.seconds.unwrap_or(0.0));
        if !r.ok {
            println!("    {}", r.details);
            failed.push(r.id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: {} of {} criteria passed", results.len(), results.len());
}
