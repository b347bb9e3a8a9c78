use super::*;
use crate::model::Topology;

fn params(features: usize, states: u32, size: usize, topology: Topology) -> SystemParams {
    SystemParams::new(features, states, size, topology, 17).unwrap()
}

fn mark(time: f64, direction: i8, uniform: f64) -> Mark {
    Mark { index: 1, time, direction, uniform }
}

fn iface_sim(features: usize, topology: Topology, masks: Vec<u64>) -> Simulator {
    let size = if topology.is_periodic() { masks.len() } else { masks.len() + 1 };
    let p = params(features, 2, size, topology);
    let state = InterfaceState::from_masks(features, topology, masks).unwrap();
    Simulator::new_interface(&p, state, MarkSource::new(5)).unwrap()
}

#[test]
fn collision_annihilates_both_particles() {
    // F = 2, level 0 occupied on edges 1 and 2: both are 1-sites, r(1) = 1/2.
    let mut sim = iface_sim(2, Topology::Torus, vec![0, 1, 1, 0, 0, 0]);
    let rec = sim.apply_mark(StreamKey::new(1, 0), &mark(0.3, 1, 0.25)).unwrap();
    assert!(rec.accepted);
    assert_eq!(rec.kind, EventKind::Annihilate);
    assert_eq!(rec.particle_delta(), -2);
    assert_eq!(sim.interface().total_particles(), 0);
    assert_eq!(rec.annihilation_site(), Some(1));
}

#[test]
fn left_jump_annihilation_is_indexed_by_left_edge() {
    let mut sim = iface_sim(2, Topology::Torus, vec![1, 1, 0, 0]);
    let rec = sim.apply_mark(StreamKey::new(1, 0), &mark(0.1, -1, 0.01)).unwrap();
    assert_eq!(rec.kind, EventKind::Annihilate);
    assert_eq!(rec.annihilation_site(), Some(0));
    // Wrap-around pair (3, 0) on the 4-torus is indexed by edge 3.
    let mut sim = iface_sim(2, Topology::Torus, vec![1, 0, 0, 1]);
    let rec = sim.apply_mark(StreamKey::new(3, 0), &mark(0.1, 1, 0.01)).unwrap();
    assert_eq!(rec.annihilation_site(), Some(3));
}

#[test]
fn empty_level_mark_only_moves_the_clock() {
    let mut sim = iface_sim(3, Topology::Torus, vec![0b001, 0, 0b011, 0]);
    let before = sim.interface().clone();
    let rec = sim.apply_mark(StreamKey::new(1, 2), &mark(2.5, 1, 0.01)).unwrap();
    assert!(!rec.accepted);
    assert_eq!(rec.kind, EventKind::Rejected);
    assert_eq!(sim.interface(), &before);
    assert_eq!(sim.clock(), 2.5);
}

#[test]
fn frozen_particles_never_move() {
    let mut sim = iface_sim(3, Topology::Torus, vec![0b111, 0, 0, 0]);
    for level in 0..3 {
        let rec = sim.apply_mark(StreamKey::new(0, level), &mark(1.0 + level as f64, 1, f64::MIN_POSITIVE)).unwrap();
        assert!(!rec.accepted);
        assert_eq!(rec.occupancy, 3);
    }
    assert!(sim.is_absorbing());
    // Stepping through the natural marks never moves them either.
    for _ in 0..1000 {
        let rec = sim.step().unwrap();
        assert!(!rec.accepted);
    }
    assert_eq!(sim.interface().mask(0), 0b111);
}

#[test]
fn single_feature_system_is_absorbed_at_time_zero() {
    let p = params(1, 2, 50, Topology::Torus);
    let mut sim = Simulator::from_params(&p, Mode::Vertex, Initial::Uniform).unwrap();
    assert!(sim.interface().total_particles() > 0);
    assert!(sim.is_absorbing());
    let summary = sim.run(&StopRule::time(100.0), &[1.0, 10.0]);
    assert!(summary.absorbed);
    assert_eq!(summary.absorption_time, Some(0.0));
    assert_eq!(summary.accepted, 0);
    assert_eq!(summary.snapshots.len(), 2);
}

#[test]
fn monoculture_never_changes() {
    for mode in [Mode::Vertex, Mode::Interface] {
        let p = params(3, 2, 40, Topology::Torus);
        let mut sim = Simulator::from_params(&p, mode, Initial::Monoculture).unwrap();
        assert!(sim.step().is_none());
        let summary = sim.run(&StopRule::time(1e6), &[]);
        assert_eq!(summary.accepted, 0);
        assert_eq!(summary.absorption_time, Some(0.0));
    }
}

#[test]
fn absorbing_examples() {
    let eq = VertexConfig::from_flat(2, 2, Topology::Torus, vec![1; 8]).unwrap();
    assert!(Simulator::new_vertex(eq, MarkSource::new(0)).unwrap().is_absorbing());
    let alt = VertexConfig::from_flat(2, 2, Topology::Torus, vec![0, 0, 1, 1, 0, 0, 1, 1]).unwrap();
    assert!(Simulator::new_vertex(alt, MarkSource::new(0)).unwrap().is_absorbing());
    let mixed = VertexConfig::from_flat(2, 2, Topology::Torus, vec![0, 0, 0, 1, 0, 0, 1, 1]).unwrap();
    assert!(!Simulator::new_vertex(mixed, MarkSource::new(0)).unwrap().is_absorbing());
    // q = 3: overlap 0 everywhere without any 0 < ζ < F edge.
    let q3 = VertexConfig::from_flat(1, 3, Topology::Torus, vec![0, 1, 2]).unwrap();
    assert!(Simulator::new_vertex(q3, MarkSource::new(0)).unwrap().is_absorbing());
}

#[test]
fn right_jump_means_right_vertex_adopts() {
    let cultures = VertexConfig::from_flat(2, 2, Topology::Torus, vec![0, 0, 1, 0, 1, 0, 1, 0]).unwrap();
    let mut sim = Simulator::new_vertex(cultures, MarkSource::new(1)).unwrap();
    // Edge 0 joins vertices 0 and 1, which disagree at level 0 only (r(1) = 1/2).
    let rec = sim.apply_mark(StreamKey::new(0, 0), &mark(0.5, 1, 0.1)).unwrap();
    assert!(rec.accepted);
    let c = sim.cultures().unwrap();
    assert_eq!(c.culture(1), &[0, 0]);
    assert_eq!(c.culture(0), &[0, 0]);
    assert_eq!(rec.destination, Some(1));
    assert_eq!(interface_view(c), *sim.interface());

    let rec = sim.apply_mark(StreamKey::new(1, 0), &mark(0.6, -1, 0.1)).unwrap();
    assert!(rec.accepted);
    assert_eq!(sim.cultures().unwrap().culture(1), &[1, 0]);
    assert_eq!(rec.kind, EventKind::Move);
}

#[test]
fn boundary_jump_is_killed_on_the_half_line() {
    let mut sim = iface_sim(2, Topology::KilledHalfLine, vec![0b01, 0, 0b10]);
    let rec = sim.apply_mark(StreamKey::new(0, 0), &mark(0.2, -1, 0.1)).unwrap();
    assert_eq!(rec.kind, EventKind::Killed);
    assert_eq!(rec.particle_delta(), -1);
    assert_eq!(sim.interface().total_particles(), 1);
    assert_eq!(sim.kills(), 1);
    let rec = sim.apply_mark(StreamKey::new(2, 1), &mark(0.3, -1, 0.1)).unwrap();
    assert_eq!(rec.kind, EventKind::Move);
    assert_eq!(sim.interface().mask(1), 0b10);
}

#[test]
fn killing_breaks_per_level_parity() {
    let mut sim = iface_sim(2, Topology::KilledHalfLine, vec![0b01, 0b01, 0]);
    assert_eq!(sim.interface().level_counts()[0] % 2, 0);
    sim.apply_mark(StreamKey::new(0, 0), &mark(0.2, -1, 0.1)).unwrap();
    assert_eq!(sim.interface().level_counts()[0] % 2, 1);
}

#[test]
fn kill_boundary_rejects_the_torus() {
    let mut sim = iface_sim(2, Topology::Torus, vec![1, 0, 0, 1]);
    assert!(matches!(sim.kill_boundary(0, 0), Err(Error::Internal(_))));
    let mut sim = iface_sim(2, Topology::KilledHalfLine, vec![1, 0, 0]);
    sim.kill_boundary(0, 0).unwrap();
    assert_eq!(sim.interface().total_particles(), 0);
    assert!(sim.kill_boundary(0, 0).is_err());
}

#[test]
fn path_vertex_chain_loses_particles_at_the_ends() {
    let cultures = VertexConfig::from_flat(2, 2, Topology::Path, vec![0, 0, 1, 0, 1, 0]).unwrap();
    let mut sim = Simulator::new_vertex(cultures, MarkSource::new(1)).unwrap();
    let rec = sim.apply_mark(StreamKey::new(0, 0), &mark(0.5, -1, 0.1)).unwrap();
    assert_eq!(rec.kind, EventKind::Killed);
    assert_eq!(sim.cultures().unwrap().culture(0), &[1, 0]);
    assert_eq!(sim.interface().total_particles(), 0);
}

#[test]
fn interface_mode_requires_two_states() {
    let p = params(2, 3, 10, Topology::Torus);
    let state = InterfaceState::empty(2, Topology::Torus, 10);
    assert!(matches!(Simulator::new_interface(&p, state, MarkSource::new(0)), Err(Error::Config(_))));
    assert!(matches!(Simulator::from_params(&p, Mode::Interface, Initial::Uniform), Err(Error::Config(_))));
    let half = SystemParams::new(2, 2, 10, Topology::KilledHalfLine, 0).unwrap();
    assert!(Simulator::from_params(&half, Mode::Vertex, Initial::Uniform).is_err());
    assert!(Simulator::from_params(&half, Mode::Interface, Initial::HalfLine).is_ok());
}

#[test]
fn replay_is_deterministic() {
    let p = params(3, 2, 64, Topology::Torus);
    let trace = |mode| {
        let mut sim = Simulator::from_params(&p, mode, Initial::Uniform).unwrap();
        (0..5000).map_while(|_| sim.step()).collect::<Vec<_>>()
    };
    let a = trace(Mode::Interface);
    assert_eq!(a, trace(Mode::Interface));
    assert_eq!(a, trace(Mode::Vertex));
}

#[test]
fn queue_times_stay_ahead_of_the_clock() {
    let p = params(3, 2, 64, Topology::Torus);
    let mut sim = Simulator::from_params(&p, Mode::Interface, Initial::Uniform).unwrap();
    for _ in 0..2000 {
        let Some(rec) = sim.step() else { break };
        if let Some(t) = sim.next_event_time() {
            assert!(t > rec.time);
        }
        assert!(sim.pending_marks() <= 64 * 3);
    }
}

#[test]
fn vertex_mode_keeps_interface_in_sync_for_many_states() {
    for q in [2, 3, 5] {
        let p = params(4, q, 30, Topology::Path);
        let mut sim = Simulator::from_params(&p, Mode::Vertex, Initial::Uniform).unwrap();
        sim.set_full_audit(true);
        let summary = sim.run(&StopRule::events(20_000), &[]);
        assert!(summary.events > 0);
        assert_eq!(interface_view(sim.cultures().unwrap()), *sim.interface());
    }
}

#[test]
fn snapshots_follow_the_sample_grid() {
    let p = params(3, 2, 100, Topology::Torus);
    let mut sim = Simulator::from_params(&p, Mode::Interface, Initial::Uniform).unwrap();
    let grid = [0.0, 1.0, 2.0, 4.0, 8.0, 1e9];
    let summary = sim.run(&StopRule::time(10.0), &grid);
    let times: Vec<f64> = summary.snapshots.iter().map(|s| s.time).collect();
    assert_eq!(times, vec![0.0, 1.0, 2.0, 4.0, 8.0]);
    assert_eq!(
        summary.snapshots[0].total_particles,
        Simulator::from_params(&p, Mode::Interface, Initial::Uniform).unwrap().interface().total_particles()
    );
    assert!(summary.snapshots.windows(2).all(|w| w[0].total_particles >= w[1].total_particles));
    assert_eq!(sim.clock(), 10.0);
}

#[test]
fn event_budget_stops_the_run() {
    let p = params(3, 2, 100, Topology::Torus);
    let mut sim = Simulator::from_params(&p, Mode::Interface, Initial::Uniform).unwrap();
    let summary = sim.run(&StopRule::events(123), &[]);
    assert_eq!(summary.events, 123);
    assert!(!summary.absorbed);
}
