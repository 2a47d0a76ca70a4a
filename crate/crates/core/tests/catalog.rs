use std::collections::BTreeSet;

use wronggame::catalog::{all_raw_games, catalog_entries, emit_game_line, parse_game_line};
use wronggame::*;

const FIXTURE: &str = include_str!("../data/catalog_games.txt");

#[test]
fn fixture_lines_round_trip_and_cover_every_class() {
    let lines: Vec<&str> = FIXTURE.lines().filter(|l| !l.trim().is_empty()).collect();
    assert_eq!(lines.len(), 78);
    let mut keys = BTreeSet::new();
    for line in &lines {
        let g = parse_game_line(line).unwrap();
        assert_eq!(
            emit_game_line(&g),
            line.split_whitespace().collect::<Vec<_>>().join(" ")
        );
        keys.insert(canonical_form(&g).orbit_key);
    }
    let ours: BTreeSet<_> = enumerate_games().iter().map(|g| g.orbit_key).collect();
    assert_eq!(keys, ours);
}

#[test]
fn every_raw_game_lands_in_exactly_one_class() {
    let classes: BTreeSet<_> = enumerate_games().iter().map(|g| g.orbit_key).collect();
    let mut sizes = std::collections::BTreeMap::new();
    for g in all_raw_games() {
        let key = canonical_form(&g).orbit_key;
        assert!(classes.contains(&key));
        *sizes.entry(key).or_insert(0usize) += 1;
    }
    assert_eq!(sizes.values().sum::<usize>(), 576);
    assert!(sizes.values().all(|n| [1, 2, 4, 8].contains(n)));
}

#[test]
fn json_export_has_one_entry_per_class() {
    let entries = catalog_entries(&enumerate_games());
    let json = serde_json::to_value(&entries).unwrap();
    let arr = json.as_array().unwrap();
    assert_eq!(arr.len(), 78);
    assert_eq!(arr[0]["index"], 1);
    assert_eq!(arr[77]["index"], 78);
    for e in arr {
        let g = parse_game_line(e["encoding"].as_str().unwrap()).unwrap();
        assert_eq!(serde_json::to_value(g.a.cells()).unwrap(), e["A"]);
    }
}
