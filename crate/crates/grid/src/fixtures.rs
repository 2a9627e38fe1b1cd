//! Small committed maps standing in for the MovingAI benchmark suite.

pub const OPEN64: &str = include_str!("../fixtures/open64.map");
pub const ROOMS64: &str = include_str!("../fixtures/rooms64.map");
pub const MAZE128: &str = include_str!("../fixtures/maze128.map");
pub const BLOBS128: &str = include_str!("../fixtures/blobs128.map");
pub const TINY8: &str = include_str!("../fixtures/tiny8.map");

/// `(name, text)` for every fixture.
pub const ALL: [(&str, &str); 5] = [
    ("open64", OPEN64),
    ("rooms64", ROOMS64),
    ("maze128", MAZE128),
    ("blobs128", BLOBS128),
    ("tiny8", TINY8),
];

pub fn by_name(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".map").unwrap_or(name);
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
