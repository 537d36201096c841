//! Regenerates the direction-table fixtures under `fixtures/`.
//!
//! Run from the crate root after editing `tables.rs`:
//! `cargo run -p cvx-geom --example dump_tables`

use cvx_geom::build_direction_sets;

fn main() {
    let out_dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&out_dir).expect("create fixtures dir");
    for d in [2usize, 3] {
        let sets = build_direction_sets(d).expect("build sets");
        for set in &sets {
            let name = format!("{}_d{}.txt", set.kind(), d);
            let path = out_dir.join(&name);
            std::fs::write(&path, set.to_text()).expect("write fixture");
            println!("wrote {} ({} directions)", path.display(), set.len());
        }
    }
}
