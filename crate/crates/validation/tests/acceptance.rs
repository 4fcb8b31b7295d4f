//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fail.

use ordeval_validation as v;

fn main() {
    let work = tempfile::tempdir().expect("temp dir");
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get().max(4));

    let audit = v::run_audit();
    let meta = v::run_metaeval(&work.path().join("suite")).expect("meta-evaluation");

    let checks = [
        v::criterion_1(),
        v::criterion_2(),
        v::criterion_3(),
        v::criterion_4(&audit),
        v::criterion_5(),
        v::criterion_6(),
        v::criterion_7(&meta.report),
        v::criterion_8(&meta.report),
        v::criterion_9(work.path(), threads),
        v::criterion_10(),
    ];
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    println!("{} of {} criteria pass", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
