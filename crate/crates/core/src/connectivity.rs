//! Rook-move connectivity of the non-zero support grid `(YW)⁺_{ρ,z}`.

use crate::error::{Error, Result};
use crate::model::{Assignment, GcppTable, LabelView, VarSet};
use crate::union_find::UnionFind;

/// Why a pair `(Y, W)` fails to be `ρ,Z`-connected: the grid for `z` splits
/// into the listed components (each a list of `(y, w)` cells).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disconnection {
    pub z: Assignment,
    pub components: Vec<Vec<(Assignment, Assignment)>>,
}

/// First disjoint `(Y, W, Z)` for which the scheme is not connected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeDisconnection {
    pub y: VarSet,
    pub w: VarSet,
    pub z: VarSet,
    pub detail: Disconnection,
}

/// Components of the rook-move relation ("same row or same column") on the
/// present cells of a `rows × cols` grid stored row-major. Cells come out in
/// row-major order; components are ordered by their first cell.
pub fn rook_components(rows: usize, cols: usize, present: &[bool]) -> Vec<Vec<(usize, usize)>> {
    assert_eq!(present.len(), rows * cols, "grid size mismatch");
    let mut uf = UnionFind::new(rows * cols);
    let mut row_anchor = vec![usize::MAX; rows];
    let mut col_anchor = vec![usize::MAX; cols];
    for r in 0..rows {
        for c in 0..cols {
            let cell = r * cols + c;
            if !present[cell] {
                continue;
            }
            for anchor in [&mut row_anchor[r], &mut col_anchor[c]] {
                if *anchor == usize::MAX {
                    *anchor = cell;
                } else {
                    uf.union(*anchor, cell);
                }
            }
        }
    }
    uf.classes()
        .into_iter()
        .filter(|class| present[class[0]])
        .map(|class| class.into_iter().map(|cell| (cell / cols, cell % cols)).collect())
        .collect()
}

fn check_disjoint(y: VarSet, w: VarSet, z: VarSet, all: VarSet) -> Result<()> {
    if !y.is_disjoint(w) || !y.is_disjoint(z) || !w.is_disjoint(z) {
        return Err(Error::OverlappingScopes);
    }
    if !y.union(w).union(z).is_subset(all) {
        return Err(Error::UnknownVariable(format!("{:?}", y.union(w).union(z).difference(all))));
    }
    Ok(())
}

pub(crate) fn disconnection_view(view: LabelView<'_>, y: VarSet, w: VarSet, z: VarSet) -> Option<Disconnection> {
    let scheme = view.scheme;
    let offs = &scheme.offsets().left;
    let (ly, lw) = (&offs[y.bits() as usize], &offs[w.bits() as usize]);
    let mut present = vec![false; ly.len() * lw.len()];
    for (zi, &zo) in offs[z.bits() as usize].iter().enumerate() {
        for (r, &yo) in ly.iter().enumerate() {
            for (c, &wo) in lw.iter().enumerate() {
                present[r * lw.len() + c] = !view.is_zero(yo + wo + zo);
            }
        }
        let comps = rook_components(ly.len(), lw.len(), &present);
        if comps.len() > 1 {
            return Some(Disconnection {
                z: scheme.assignment_at(z, zi),
                components: comps
                    .into_iter()
                    .map(|cells| {
                        cells
                            .into_iter()
                            .map(|(r, c)| (scheme.assignment_at(y, r), scheme.assignment_at(w, c)))
                            .collect()
                    })
                    .collect(),
            });
        }
    }
    None
}

/// The witness for `(Y, W)` not being `ρ,Z`-connected, if there is one.
pub fn yw_disconnection(table: &GcppTable, y: VarSet, w: VarSet, z: VarSet) -> Result<Option<Disconnection>> {
    check_disjoint(y, w, z, table.scheme().all())?;
    Ok(disconnection_view(table.view(), y, w, z))
}

/// `(Y, W)` is `ρ,Z`-connected: for every `z` the support grid is a single
/// rook-move component (an empty grid counts as connected).
pub fn yw_connected(table: &GcppTable, y: VarSet, w: VarSet, z: VarSet) -> Result<bool> {
    Ok(yw_disconnection(table, y, w, z)?.is_none())
}

pub(crate) fn scheme_disconnection_view(view: LabelView<'_>) -> Option<SchemeDisconnection> {
    let all = view.scheme.all();
    for y in all.subsets_by_size() {
        if y.is_empty() {
            continue;
        }
        for w in all.difference(y).subsets_by_size() {
            if w.is_empty() {
                continue;
            }
            for z in all.difference(y.union(w)).subsets_by_size() {
                if let Some(detail) = disconnection_view(view, y, w, z) {
                    return Some(SchemeDisconnection { y, w, z, detail });
                }
            }
        }
    }
    None
}

/// First `(Y, W, Z)` breaking `ρ`-connectedness of the whole scheme.
pub fn scheme_disconnection(table: &GcppTable) -> Option<SchemeDisconnection> {
    scheme_disconnection_view(table.view())
}

pub fn scheme_connected(table: &GcppTable) -> bool {
    scheme_disconnection(table).is_none()
}
