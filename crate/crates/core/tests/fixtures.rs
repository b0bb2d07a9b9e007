//! Shipped fixtures equal the generators' canonical output. Set
//! `ESNKIT_BLESS=1` to rewrite them.

mod common;

use esnkit::io;

#[test]
fn fixtures_match_generators() {
    let dir = common::fixture_dir();
    let bless = std::env::var_os("ESNKIT_BLESS").is_some();
    if bless {
        std::fs::create_dir_all(&dir).unwrap();
    }
    for (name, s) in common::fixtures() {
        let text = io::emit(&s);
        let path = dir.join(name);
        if bless {
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(on_disk, text, "{name} is stale");
        assert_eq!(io::parse(&on_disk).unwrap(), s, "{name}");
    }
}
