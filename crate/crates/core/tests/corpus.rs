use std::path::PathBuf;

use symqaoa::graphs::{connected_graphs, encode_graph6, read_corpus};
use symqaoa::harness::{select_graphs, GraphFilter};

fn corpus_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/graph8c.g6")
}

#[test]
fn committed_corpus_is_the_generator_output() {
    let entries = read_corpus(corpus_path()).unwrap();
    let generated = connected_graphs(8).unwrap();
    assert_eq!(entries.len(), 11_117);
    assert_eq!(entries.len(), generated.len());
    for (e, g) in entries.iter().zip(&generated) {
        assert_eq!(e.graph6, encode_graph6(g).unwrap());
        assert_eq!(&e.graph, g);
        assert!(e.graph.is_connected());
    }
    assert_eq!(entries[0].graph_id, 1);
    assert_eq!(entries.last().unwrap().graph_id, 11_117);
}

#[test]
fn symmetry_census() {
    let entries = read_corpus(corpus_path()).unwrap();
    let (all, failures) = select_graphs(entries.clone(), GraphFilter::All);
    assert!(failures.is_empty());
    let trivial = all.iter().filter(|c| !c.is_symmetric()).count();
    assert_eq!((trivial, all.len() - trivial), (3_552, 7_565));
    let (symmetric, _) = select_graphs(entries, GraphFilter::NontrivialSym);
    assert_eq!(symmetric.len(), 7_565);
    // trivial group <=> discrete orbits
    for c in &all {
        assert_eq!(c.is_symmetric(), !c.max_sym.is_discrete());
    }
}
