use bot_core::verifier::verify_region;
fn main() {
    let t = std::time::Instant::now();
    let r = verify_region(1e-2, 1e-2, 1e-4, 40).unwrap();
    println!("1e-2: all_positive={} cuboids={} depth={} [{:?}]", r.all_positive, r.cuboids_processed, r.max_depth, t.elapsed());
}
