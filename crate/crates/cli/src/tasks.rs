use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use klr_core::cartan::{CartanDatum, Label};
use klr_core::cocenter::{rotated_gamma, Cocenter, CocenterError};
use klr_core::cyclotomic::{block_order, CyclotomicContext, CyclotomicError, FiniteDimAlgebra};
use klr_core::klr::{verify_relations, KlrAlgebra, KlrElement, KlrError};
use klr_core::linalg::SparseVec;
use klr_core::Field;

use crate::config::{label_sequence, InstanceSpec, JobConfig, Task};
use crate::report::{ClaimRecord, InstanceRecord, Status};
use crate::{Failure, JobError};

impl From<KlrError> for JobError {
    fn from(e: KlrError) -> Self {
        match e {
            KlrError::TooLarge(..) => JobError::Precondition(e.to_string()),
            KlrError::Cartan(_) | KlrError::UnknownSequence(_) => JobError::Parse(e.to_string()),
            _ => JobError::Internal(e.to_string()),
        }
    }
}

impl From<CyclotomicError> for JobError {
    fn from(e: CyclotomicError) -> Self {
        match e {
            CyclotomicError::NotBlockForm(_) | CyclotomicError::Unsupported | CyclotomicError::Ungraded => JobError::Precondition(e.to_string()),
            CyclotomicError::Cartan(_) => JobError::Parse(e.to_string()),
            CyclotomicError::Klr(k) => k.into(),
            _ => JobError::Internal(e.to_string()),
        }
    }
}

impl From<CocenterError> for JobError {
    fn from(e: CocenterError) -> Self {
        match e {
            CocenterError::NotMultiplicityFree | CocenterError::BadGamma(_) | CocenterError::GammaFirst(_) | CocenterError::LabelNotInBeta(_) => {
                JobError::Precondition(e.to_string())
            }
            CocenterError::Cyclotomic(c) => c.into(),
            CocenterError::Klr(k) => k.into(),
            _ => JobError::Internal(e.to_string()),
        }
    }
}

pub struct Runner<F: Field> {
    cfg: JobConfig,
    datum: Arc<CartanDatum<F>>,
    cartan: String,
}

impl<F: Field> Runner<F> {
    pub fn new(cfg: &JobConfig) -> Result<Self, JobError> {
        let datum = Arc::new(cfg.cartan.build::<F>()?);
        Ok(Runner { cfg: cfg.clone(), datum, cartan: cfg.cartan.name() })
    }

    fn labels(&self) -> &[String] {
        self.datum.labels()
    }

    /// Validate every precondition first, then run the jobs in parallel;
    /// claims come back in job order.
    pub fn run(&self) -> Result<Vec<ClaimRecord>, Failure> {
        let jobs: Vec<(Task, InstanceSpec)> = match self.cfg.task {
            Task::Sweep => {
                let checks = self.cfg.sweep_checks();
                if checks.contains(&Task::Sweep) {
                    return Err(JobError::Parse("sweep checks cannot include sweep".into()).into());
                }
                let insts = self.cfg.sweep_instances(self.labels())?;
                insts.iter().flat_map(|i| checks.iter().map(move |&t| (t, i.clone()))).collect()
            }
            t => vec![(t, self.cfg.instance(self.labels())?)],
        };
        for (t, inst) in &jobs {
            self.precheck(*t, inst)?;
        }
        let results: Vec<Result<Vec<ClaimRecord>, Failure>> = jobs.par_iter().map(|(t, inst)| self.guarded(*t, inst)).collect();
        let mut claims = Vec::new();
        for r in results {
            claims.extend(r?);
        }
        Ok(claims)
    }

    fn guarded(&self, task: Task, inst: &InstanceSpec) -> Result<Vec<ClaimRecord>, Failure> {
        let witness = || json!({"task": task.name(), "instance": self.record(inst, None)});
        match catch_unwind(AssertUnwindSafe(|| self.run_task(task, inst))) {
            Ok(Ok(c)) => Ok(c),
            Ok(Err(e @ JobError::Internal(_))) => Err(Failure { error: e, witness: Some(witness()) }),
            Ok(Err(e)) => Err(e.into()),
            Err(p) => {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "unknown panic".into());
                Err(Failure { error: JobError::Internal(format!("panic: {msg}")), witness: Some(witness()) })
            }
        }
    }

    fn algebra(&self, inst: &InstanceSpec) -> Result<Arc<KlrAlgebra<F>>, JobError> {
        Ok(KlrAlgebra::new(self.datum.clone(), inst.beta.clone())?)
    }

    fn context(&self, inst: &InstanceSpec, raise: Option<Label>) -> Result<Arc<CyclotomicContext<F>>, JobError> {
        let lambda = match raise {
            Some(i) => inst.lambda.plus_fundamental(i),
            None => inst.lambda.clone(),
        };
        if lambda.coords.len() != self.labels().len() {
            return Err(JobError::Parse("lambda has the wrong number of coordinates".into()));
        }
        Ok(CyclotomicContext::new(self.algebra(inst)?, lambda)?)
    }

    fn finite(&self, ctx: Arc<CyclotomicContext<F>>) -> Result<FiniteDimAlgebra<F>, JobError> {
        Ok(FiniteDimAlgebra::new(ctx)?)
    }

    fn check_dimension(&self, ctx: &CyclotomicContext<F>) -> Result<(), JobError> {
        if !ctx.supports_full_algebra() {
            return Err(JobError::Precondition(
                "the full quotient needs every weight sequence in block form (multiplicity-free or single-label beta)".into(),
            ));
        }
        let dim = ctx.full_basis()?.len();
        let cap = self.cfg.options.max_dimension();
        if dim > cap {
            return Err(JobError::Precondition(format!("quotient dimension {dim} exceeds max_dimension {cap}")));
        }
        Ok(())
    }

    fn precheck(&self, task: Task, inst: &InstanceSpec) -> Result<(), JobError> {
        let h = inst.beta.height();
        let max = self.cfg.options.max_height();
        if h > max {
            return Err(JobError::Precondition(format!("height {h} of beta exceeds max_height {max}")));
        }
        let alg = self.algebra(inst)?;
        let ctx = self.context(inst, None)?;
        let needs_mf = matches!(task, Task::CocenterBasis | Task::IotaCheck);
        if needs_mf && !inst.beta.is_multiplicity_free() {
            return Err(JobError::Precondition(format!("task {task} needs multiplicity-free beta, got {:?}", inst.beta.mults)));
        }
        if let Some(g) = &inst.gamma {
            if alg.seq_index(g).is_err() {
                return Err(JobError::Precondition(format!("gamma {g:?} is not a weight sequence of beta")));
            }
        }
        match task {
            Task::VerifyRelations => {}
            Task::BiweightBasis => {
                if let Some(bw) = &self.cfg.biweight {
                    let target = label_sequence(self.labels(), &bw.target, "biweight.target")?;
                    let source = label_sequence(self.labels(), &bw.source, "biweight.source")?;
                    alg.seq_index(&target)?;
                    alg.seq_index(&source)?;
                    if block_order(&target, self.labels().len()).is_none() {
                        return Err(JobError::Precondition(format!("target {:?} is not in block form", bw.target)));
                    }
                }
            }
            Task::FullBasis | Task::CenterCheck | Task::CocenterBasis => self.check_dimension(&ctx)?,
            Task::AnnihilatorCheck | Task::TraceCheck => {
                if task == Task::TraceCheck && !ctx.is_graded() {
                    return Err(JobError::Precondition("trace-check needs pure-power cyclotomic polynomials".into()));
                }
                self.check_dimension(&ctx)?;
                for i in inst.beta.support() {
                    self.check_dimension(&*self.context(inst, Some(i))?)?;
                }
            }
            Task::IotaCheck => {}
            Task::Sweep => return Err(JobError::Parse("sweep cannot be nested".into())),
        }
        Ok(())
    }

    fn names(&self, seq: &[Label]) -> Vec<String> {
        seq.iter().map(|&l| self.datum.label_name(l).to_string()).collect()
    }

    fn record(&self, inst: &InstanceSpec, gamma: Option<&[Label]>) -> InstanceRecord {
        let labels = self.labels();
        let map = |v: &[u32]| -> BTreeMap<String, u32> { labels.iter().cloned().zip(v.iter().copied()).collect() };
        InstanceRecord {
            cartan: self.cartan.clone(),
            lambda: map(&inst.lambda.coords),
            beta: map(&inst.beta.mults),
            gamma: gamma.or(inst.gamma.as_deref()).map(|g| self.names(g)),
        }
    }

    fn claim(&self, inst: &InstanceSpec, gamma: Option<&[Label]>, claim: &str, ok: bool, data: Value, witness: Option<Value>) -> ClaimRecord {
        let data = match data {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        ClaimRecord { instance: self.record(inst, gamma), claim: claim.into(), status: Status::from_bool(ok), data, witness }
    }

    fn run_task(&self, task: Task, inst: &InstanceSpec) -> Result<Vec<ClaimRecord>, JobError> {
        match task {
            Task::VerifyRelations => self.verify_relations(inst),
            Task::BiweightBasis => self.biweight_basis(inst),
            Task::FullBasis => self.full_basis(inst),
            Task::CocenterBasis => self.cocenter_basis(inst),
            Task::CenterCheck => self.center_check(inst),
            Task::AnnihilatorCheck => self.annihilator_check(inst),
            Task::TraceCheck => self.trace_check(inst),
            Task::IotaCheck => self.iota_check(inst),
            Task::Sweep => Err(JobError::Parse("sweep cannot be nested".into())),
        }
    }

    fn verify_relations(&self, inst: &InstanceSpec) -> Result<Vec<ClaimRecord>, JobError> {
        let alg = self.algebra(inst)?;
        let rep = verify_relations(&alg);
        let witness = (!rep.passed()).then(|| {
            Value::Array(rep.failures.iter().map(|f| json!({"relation": f.relation, "nu": f.nu, "residual": f.residual})).collect())
        });
        let data = json!({"checked": rep.checked, "failures": rep.failures.len()});
        Ok(vec![self.claim(inst, None, "defining-relations", rep.passed(), data, witness)])
    }

    fn biweight_basis(&self, inst: &InstanceSpec) -> Result<Vec<ClaimRecord>, JobError> {
        let ctx = self.context(inst, None)?;
        let alg = ctx.algebra().clone();
        let pairs: Vec<(Vec<Label>, Vec<Label>)> = match &self.cfg.biweight {
            Some(bw) => vec![(label_sequence(self.labels(), &bw.target, "biweight.target")?, label_sequence(self.labels(), &bw.source, "biweight.source")?)],
            None => {
                let seqs = alg.sequences();
                seqs.iter()
                    .filter(|t| block_order(t, self.labels().len()).is_some())
                    .flat_map(|t| seqs.iter().map(move |s| (t.clone(), s.clone())))
                    .collect()
            }
        };
        let n = alg.n();
        let mut out = Vec::new();
        for (target, source) in pairs {
            let basis = ctx.biweight_basis(&target, &source)?;
            let mut ok = true;
            let mut graded: BTreeMap<String, usize> = BTreeMap::new();
            let mut elements = Vec::new();
            for (i, b) in basis.elements.iter().enumerate() {
                let lift = ctx.lift(&basis, i);
                ok &= ctx.coordinates(&basis, lift.terms())? == SparseVec::unit(i);
                for k in 0..n {
                    let xk = KlrElement::x(&alg, k)?;
                    ok &= ctx.coordinates(&basis, lift.try_mul(&xk)?.terms()).is_ok();
                }
                *graded.entry(b.degree.to_string()).or_default() += 1;
                elements.push(json!({"w": one_based(alg.perm(b.w).images()), "exps": b.exps.exps(), "degree": b.degree}));
            }
            let data = json!({
                "target": self.names(&target),
                "source": self.names(&source),
                "size": basis.len(),
                "graded_dimension": graded,
                "elements": elements,
            });
            out.push(self.claim(inst, None, "biweight-basis-closed", ok, data, None));
        }
        Ok(out)
    }

    fn full_basis(&self, inst: &InstanceSpec) -> Result<Vec<ClaimRecord>, JobError> {
        let fd = self.finite(self.context(inst, None)?)?;
        let unit = fd.unit();
        let mut ok = fd.spot_check_associativity(self.cfg.options.samples());
        for i in 0..fd.dim() {
            let e = SparseVec::unit(i);
            ok &= fd.mul_vec(&unit, &e) == e && fd.mul_vec(&e, &unit) == e;
        }
        let mut graded: BTreeMap<String, usize> = BTreeMap::new();
        for i in 0..fd.dim() {
            *graded.entry(fd.degree(i).to_string()).or_default() += 1;
        }
        let data = json!({"dim": fd.dim(), "top_degree": fd.top_degree(), "graded_dimension": graded});
        Ok(vec![self.claim(inst, None, "monomial-basis-structure", ok, data, None)])
    }

    fn cocenter(&self, inst: &InstanceSpec, ctx: Arc<CyclotomicContext<F>>) -> Result<Cocenter<F>, JobError> {
        Ok(Cocenter::new(ctx, inst.gamma.clone())?)
    }

    fn cocenter_basis(&self, inst: &InstanceSpec) -> Result<Vec<ClaimRecord>, JobError> {
        let ctx = self.context(inst, None)?;
        let cc = self.cocenter(inst, ctx.clone())?;
        let fd = self.finite(ctx)?;
        let (dim, independent) = cc.linear_algebra_check(&fd)?;
        let alg = cc.algebra();
        let elements: Vec<Value> = cc.basis().elements.iter().map(|(s, a)| json!({"nu": self.names(alg.seq(*s)), "exps": a})).collect();
        let size = cc.basis().len();
        let data = json!({"size": size, "dim_cocenter": dim, "independent": independent, "elements": elements});
        Ok(vec![self.claim(inst, Some(cc.gamma().gamma()), "cocenter-basis", size == dim && independent, data, None)])
    }

    fn vector_witness(&self, fd: &FiniteDimAlgebra<F>, v: &SparseVec<F>) -> Value {
        let alg = fd.context().algebra();
        Value::Array(
            v.entries()
                .iter()
                .map(|(i, c)| {
                    let b = &fd.basis().elements[*i];
                    json!({"w": one_based(alg.perm(b.w).images()), "nu": self.names(alg.seq(b.nu)), "exps": b.exps.exps(), "coeff": c.to_string()})
                })
                .collect(),
        )
    }

    fn center_check(&self, inst: &InstanceSpec) -> Result<Vec<ClaimRecord>, JobError> {
        let ctx = self.context(inst, None)?;
        let fd = self.finite(ctx.clone())?;
        let mut out = Vec::new();
        if inst.beta.is_multiplicity_free() {
            let cc = self.cocenter(inst, ctx)?;
            let r = cc.conjecture_verify(&fd)?;
            let gamma = cc.gamma().gamma().to_vec();
            let data = self.verdict(inst, &gamma, r.dim_center, r.dim_sym_image, r.dim_cocenter, Some(r.t_gamma_size), Some(r.iota_injective), r.surjective);
            let witness = (!r.missing.is_empty()).then(|| Value::Array(r.missing.iter().map(|v| self.vector_witness(&fd, v)).collect()));
            out.push(self.claim(inst, Some(&gamma), "center-equals-symmetric-image", r.surjective, data, witness));
            let data = json!({"t_gamma_size": r.t_gamma_size, "dim_cocenter": r.dim_cocenter, "independent": r.t_gamma_independent});
            out.push(self.claim(inst, Some(&gamma), "cocenter-basis", r.cocenter_matches(), data, None));
            out.push(self.claim(inst, Some(&gamma), "iota-injective", r.iota_injective, json!({}), None));
        } else {
            let center = fd.center();
            let sym = fd.symmetric_image();
            let central = sym.iter().all(|v| fd.is_central(v));
            let span = klr_core::linalg::Echelon::from_rows(fd.dim(), sym.iter().cloned());
            let missing: Vec<_> = center.iter().filter(|v| !span.contains(v)).collect();
            let ok = central && missing.is_empty() && center.len() == sym.len();
            let data = self.verdict(inst, &[], center.len(), sym.len(), fd.cocenter_dim(), None, None, ok);
            let witness = (!missing.is_empty()).then(|| Value::Array(missing.iter().map(|v| self.vector_witness(&fd, v)).collect()));
            out.push(self.claim(inst, None, "center-equals-symmetric-image", ok, data, witness));
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn verdict(
        &self,
        inst: &InstanceSpec,
        gamma: &[Label],
        dim_center: usize,
        dim_sym_image: usize,
        dim_cocenter: usize,
        t_gamma_size: Option<usize>,
        iota_injective: Option<bool>,
        surjective: bool,
    ) -> Value {
        let rec = self.record(inst, None);
        json!({
            "cartan": rec.cartan,
            "lambda": rec.lambda,
            "beta": rec.beta,
            "gamma": if gamma.is_empty() { Value::Null } else { json!(self.names(gamma)) },
            "dim_center": dim_center,
            "dim_sym_image": dim_sym_image,
            "dim_cocenter": dim_cocenter,
            "t_gamma_size": t_gamma_size,
            "iota_injective": iota_injective,
            "verdict": if surjective { "surjective" } else { "not-surjective" },
        })
    }

    fn annihilator_check(&self, inst: &InstanceSpec) -> Result<Vec<ClaimRecord>, JobError> {
        let small = self.finite(self.context(inst, None)?)?;
        let mut out = Vec::new();
        for i in inst.beta.support() {
            let big = self.finite(self.context(inst, Some(i))?)?;
            let r = big.annihilator_check(&small, i);
            let data = json!({
                "label": self.datum.label_name(i),
                "dim_big": r.dim_big,
                "dim_small": r.dim_small,
                "dim_annihilator": r.dim_annihilator,
                "dim_kernel": r.dim_kernel,
            });
            out.push(self.claim(inst, None, "annihilator-equals-kernel", r.equal, data, None));
        }
        Ok(out)
    }

    fn trace_check(&self, inst: &InstanceSpec) -> Result<Vec<ClaimRecord>, JobError> {
        let small = self.finite(self.context(inst, None)?)?;
        let t = small.trace_report()?;
        let data = json!({"support_degree": t.degree, "form_degree": -t.degree, "solution_dim": t.solution_dim});
        let mut out = vec![self.claim(inst, None, "symmetrizing-trace", t.nondegenerate, data, None)];
        for i in inst.beta.support() {
            let big = self.finite(self.context(inst, Some(i))?)?;
            let r = big.traiden_check(&small, i)?;
            let data = json!({
                "label": self.datum.label_name(i),
                "solution_dim": r.solution_dim,
                "constant": r.constant.map(|c| c.to_string()),
            });
            out.push(self.claim(inst, None, "trace-identity", r.holds, data, None));
        }
        Ok(out)
    }

    fn iota_check(&self, inst: &InstanceSpec) -> Result<Vec<ClaimRecord>, JobError> {
        let ctx = self.context(inst, None)?;
        let mut out = Vec::new();
        for i in inst.beta.support() {
            let gamma = rotated_gamma(&inst.beta, i)?;
            let cc = Cocenter::new(ctx.clone(), Some(gamma.clone()))?;
            let r = cc.iota_check(i)?;
            let witness = (!r.violations.is_empty()).then(|| {
                Value::Array(r.violations.iter().map(|v| json!({"nu": self.names(&v.nu), "source": v.source, "image": v.image})).collect())
            });
            let data = json!({
                "label": self.datum.label_name(i),
                "source_size": r.source_size,
                "target_size": r.target_size,
                "injective": r.injective,
            });
            out.push(self.claim(inst, Some(&gamma), "iota-injective", r.passed(), data, witness));
        }
        Ok(out)
    }
}

fn one_based(images: &[u8]) -> Vec<u32> {
    images.iter().map(|&i| i as u32 + 1).collect()
}
