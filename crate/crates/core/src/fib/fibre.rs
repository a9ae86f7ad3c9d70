use std::sync::Arc;

use crate::cat::{Arr, FinCat, Obj};

use super::data::FibrationData;

/// A fibre of a fibration, materialised as a category of its own with an
/// id-preserving embedding back into the total category.
#[derive(Clone, Debug)]
pub struct Fibre {
    pub cat: Arc<FinCat>,
    /// total-category object per fibre object (ascending)
    pub objs: Vec<Obj>,
    /// total-category arrow per fibre arrow (ascending)
    pub arrs: Vec<Arr>,
}

impl Fibre {
    pub fn obj_index(&self, total_obj: Obj) -> Option<Obj> {
        self.objs.binary_search(&total_obj).ok().map(Obj)
    }

    pub fn arr_index(&self, total_arr: Arr) -> Option<Arr> {
        self.arrs.binary_search(&total_arr).ok().map(Arr)
    }
}

/// Materialises the fibre of `p` over `i`: objects over `i`, arrows over
/// `id_i`. Fibre ids ascend with the total-category ids.
pub fn fibre(p: &FibrationData, i: Obj) -> Fibre {
    let total = p.total();
    let objs = p.fibre_objects(i);
    let arrs = p.fibre_arrows(i);
    let oix = |x: Obj| Obj(objs.binary_search(&x).expect("fibre object"));
    let aix = |f: Arr| Arr(arrs.binary_search(&f).expect("fibre arrow"));
    let dom: Vec<Obj> = arrs.iter().map(|&f| oix(total.dom(f))).collect();
    let cod: Vec<Obj> = arrs.iter().map(|&f| oix(total.cod(f))).collect();
    let identity: Vec<Arr> = objs.iter().map(|&x| aix(total.id(x))).collect();
    let mut entries = Vec::new();
    for &g in &arrs {
        for &f in &arrs {
            if total.dom(g) == total.cod(f) {
                let gf = total.compose(g, f).expect("verticals compose");
                entries.push(((aix(g), aix(f)), aix(gf)));
            }
        }
    }
    let cat = FinCat::from_parts(objs.len(), dom, cod, identity, &entries)
        .expect("a fibre is a category");
    Fibre { cat: Arc::new(cat), objs, arrs }
}
