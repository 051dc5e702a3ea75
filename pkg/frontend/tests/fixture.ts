// In-memory stand-in for the model service, mirroring the canonical example
// model (base/1.0): six elements, one characteristic, eleven routes. It
// applies real applicability filtering so DOM tests can exercise tailoring
// without a network, and it logs every request for assertions.

interface Scalar {
  tag: string;
  value: string;
}

interface Wrapper {
  tag: string;
  segment: string;
  memberTag: string;
  memberIds: string[];
  memberAccess: 'public' | 'protected';
}

interface ModelElement {
  type: string;
  id: string;
  attrs: Array<[string, string]>;
  detail: Scalar[];
  protectedDetail: Scalar[];
  wrappers: Wrapper[];
  condition: Record<string, string[]>;
}

export interface CharacteristicDef {
  label: string;
  values: string[];
}

const CHARACTERISTICS: Record<string, CharacteristicDef> = {
  projectType: { label: 'Project type', values: ['dev', 'maint'] },
};

const ELEMENTS: ModelElement[] = [
  {
    type: 'Discipline',
    id: 'd1',
    attrs: [
      ['id', 'd1'],
      ['version', '1.0'],
      ['name', 'Planning'],
    ],
    detail: [
      { tag: 'Number', value: '1' },
      { tag: 'Description', value: '<p>Defines how the project is planned and tracked.</p>' },
    ],
    protectedDetail: [],
    wrappers: [
      {
        tag: 'WorkProducts',
        segment: 'workproduct',
        memberTag: 'WorkProduct',
        memberIds: ['wp1', 'wp2'],
        memberAccess: 'public',
      },
    ],
    condition: {},
  },
  {
    type: 'WorkProduct',
    id: 'wp1',
    attrs: [
      ['id', 'wp1'],
      ['name', 'Project Plan'],
    ],
    detail: [
      { tag: 'Description', value: '<p>The master plan covering scope, schedule, and staffing.</p>' },
    ],
    protectedDetail: [],
    wrappers: [
      { tag: 'Tools', segment: 'tools', memberTag: 'Tool', memberIds: ['t1'], memberAccess: 'protected' },
    ],
    condition: { projectType: ['dev'] },
  },
  {
    type: 'WorkProduct',
    id: 'wp2',
    attrs: [
      ['id', 'wp2'],
      ['name', 'Risk List'],
    ],
    detail: [{ tag: 'Description', value: '<p>Running list of project risks with owners.</p>' }],
    protectedDetail: [],
    wrappers: [],
    condition: {},
  },
  {
    type: 'Tool',
    id: 't1',
    attrs: [
      ['id', 't1'],
      ['name', 'Issue Tracker'],
    ],
    detail: [],
    protectedDetail: [{ tag: 'Vendor', value: 'ACME' }],
    wrappers: [],
    condition: {},
  },
  {
    type: 'MethodReference',
    id: 'm1',
    attrs: [
      ['id', 'm1'],
      ['version', '1.0'],
      ['name', 'Test-Driven Development'],
    ],
    detail: [
      { tag: 'Description', value: '<p>Write a failing test first, then the production code.</p>' },
    ],
    protectedDetail: [],
    wrappers: [
      {
        tag: 'BibItemRefs',
        segment: 'bibitemref',
        memberTag: 'BibItemRef',
        memberIds: ['b1'],
        memberAccess: 'public',
      },
    ],
    condition: {},
  },
  {
    type: 'BibliographyItem',
    id: 'b1',
    attrs: [
      ['id', 'b1'],
      ['name', 'Beck: TDD by Example'],
    ],
    detail: [
      {
        tag: 'CitationText',
        value: 'Kent Beck. Test-Driven Development: By Example. Addison-Wesley, 2002.',
      },
    ],
    protectedDetail: [],
    wrappers: [],
    condition: {},
  },
];

const ENDPOINTS = ['Discipline', 'WorkProduct', 'MethodReference', 'BibliographyItem'];

export function applicable(element: ModelElement, selections: Record<string, string>): boolean {
  for (const [key, allowed] of Object.entries(element.condition)) {
    const chosen = selections[key];
    if (chosen !== undefined && !allowed.includes(chosen)) return false;
  }
  return true;
}

function lookup(id: string): ModelElement {
  const element = ELEMENTS.find((e) => e.id === id);
  if (!element) throw new Error(`fixture has no element ${id}`);
  return element;
}

function ofType(type: string): ModelElement[] {
  return ELEMENTS.filter((e) => e.type === type);
}

function esc(value: string): string {
  return value
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function attrText(attrs: Array<[string, string]>): string {
  return attrs.map(([k, v]) => ` ${k}="${esc(v)}"`).join('');
}

function memberLines(
  element: ModelElement,
  access: 'public' | 'protected',
  pad: string,
  tag: string = element.type,
): string[] {
  const open = `${pad}<${tag}${attrText(element.attrs)}`;
  if (access === 'protected' && element.protectedDetail.length > 0) {
    const lines = [`${open}>`];
    for (const scalar of element.protectedDetail) {
      lines.push(`${pad}  <${scalar.tag}>${esc(scalar.value)}</${scalar.tag}>`);
    }
    lines.push(`${pad}</${tag}>`);
    return lines;
  }
  return [`${open}/>`];
}

function wrapperLines(
  wrapper: Wrapper,
  selections: Record<string, string>,
  pad: string,
): string[] {
  const members = wrapper.memberIds.map(lookup).filter((m) => applicable(m, selections));
  if (members.length === 0) return [`${pad}<${wrapper.tag}/>`];
  const lines = [`${pad}<${wrapper.tag}>`];
  for (const member of members) {
    lines.push(...memberLines(member, wrapper.memberAccess, pad + '  ', wrapper.memberTag));
  }
  lines.push(`${pad}</${wrapper.tag}>`);
  return lines;
}

const XML_DECL = '<?xml version="1.0" encoding="UTF-8"?>';

function collectionXml(type: string, selections: Record<string, string>): string {
  const lines = [XML_DECL, '<response>'];
  for (const element of ofType(type)) {
    if (applicable(element, selections)) lines.push(...memberLines(element, 'public', '  '));
  }
  lines.push('</response>');
  return lines.join('\n') + '\n';
}

function byIdXml(element: ModelElement, selections: Record<string, string>): string {
  const lines = [XML_DECL, `<${element.type}${attrText(element.attrs)}>`];
  for (const scalar of element.detail) {
    lines.push(`  <${scalar.tag}>${esc(scalar.value)}</${scalar.tag}>`);
  }
  for (const wrapper of element.wrappers) {
    lines.push(...wrapperLines(wrapper, selections, '  '));
  }
  lines.push(`</${element.type}>`);
  return lines.join('\n') + '\n';
}

function nestedXml(
  element: ModelElement,
  wrapper: Wrapper,
  selections: Record<string, string>,
): string {
  const lines = [XML_DECL, '<response>', `  <${element.type}${attrText(element.attrs)}>`];
  lines.push(...wrapperLines(wrapper, selections, '    '));
  lines.push(`  </${element.type}>`, '</response>');
  return lines.join('\n') + '\n';
}

export function openapiDocument(
  characteristics: Record<string, CharacteristicDef> = CHARACTERISTICS,
): any {
  const paths: Record<string, any> = {};
  for (const type of ENDPOINTS) {
    const segment = type.toLowerCase();
    paths[`/api/${segment}`] = {
      get: { 'x-route-kind': 'collection', 'x-source-type': type },
    };
    paths[`/api/${segment}/{${segment}Id}`] = {
      get: { 'x-route-kind': 'by-id', 'x-source-type': type },
    };
  }
  const nested: Array<[string, string, string, string, string]> = [
    ['discipline', 'workproduct', 'Discipline', 'WorkProduct', 'WorkProduct'],
    ['workproduct', 'tools', 'WorkProduct', 'Tool', 'Tools'],
    ['methodreference', 'bibitemref', 'MethodReference', 'BibliographyItem', 'BibItemRef'],
  ];
  for (const [sourceSeg, assocSeg, sourceType, targetType, association] of nested) {
    paths[`/api/${sourceSeg}/{${sourceSeg}Id}/${assocSeg}`] = {
      get: {
        'x-route-kind': 'nested',
        'x-source-type': sourceType,
        'x-target-type': targetType,
        'x-association': association,
      },
    };
  }
  const parameters: Record<string, any> = {};
  for (const [key, info] of Object.entries(characteristics)) {
    parameters[key] = {
      name: key,
      in: 'query',
      required: false,
      description: info.label,
      schema: { type: 'string', enum: info.values },
    };
  }
  return {
    openapi: '3.0.3',
    info: { title: 'Process model service', version: '1.0' },
    paths,
    components: { parameters },
  };
}

export interface LoggedRequest {
  method: string;
  url: string;
}

interface Plan {
  status: number;
  body: string | Uint8Array;
  contentType: string;
  headers?: Record<string, string>;
}

function jsonPlan(status: number, payload: unknown): Plan {
  return { status, body: JSON.stringify(payload), contentType: 'application/json' };
}

function errorPlan(status: number, code: string, message: string): Plan {
  return jsonPlan(status, { code, message });
}

function xmlPlan(body: string): Plan {
  return { status: 200, body, contentType: 'application/xml; charset=utf-8' };
}

export function fakeExportBytes(kind: string, selections: Record<string, string>): Uint8Array {
  const canonical = Object.keys(selections)
    .sort()
    .map((k) => `${k}=${selections[k]}`)
    .join('&');
  return new TextEncoder().encode(`FAKEZIP ${kind} ${canonical}`);
}

export class FixtureService {
  readonly requests: LoggedRequest[] = [];
  readonly characteristics: Record<string, CharacteristicDef> = { ...CHARACTERISTICS };
  readonly profiles: Array<{
    id: string;
    name: string;
    variant: string;
    selections: Record<string, string>;
  }> = [];

  /** Add a characteristic no element is conditioned on (widens valid input). */
  declareCharacteristic(key: string, label: string, values: string[]): void {
    this.characteristics[key] = { label, values };
  }

  readonly fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = typeof input === 'string' ? input : input instanceof URL ? input.href : input.url;
    const method = init?.method ?? 'GET';
    this.requests.push({ method, url });
    const parsed = new URL(url, 'http://fixture.test');
    const plan = this.handle(method, parsed, init);
    return new Response(plan.body as BodyInit, {
      status: plan.status,
      headers: { 'content-type': plan.contentType, ...(plan.headers ?? {}) },
    });
  };

  lastModelRequest(): URL | null {
    for (let i = this.requests.length - 1; i >= 0; i--) {
      const entry = this.requests[i] as LoggedRequest;
      if (entry.url.includes('/api/')) return new URL(entry.url, 'http://fixture.test');
    }
    return null;
  }

  private handle(method: string, url: URL, init?: RequestInit): Plan {
    const segments = url.pathname.split('/').filter((s) => s.length > 0);
    const query: Record<string, string> = {};
    url.searchParams.forEach((value, key) => {
      query[key] = value;
    });

    if (method === 'POST' && url.pathname === '/profiles') {
      return this.createProfile(init?.body);
    }
    if (method !== 'GET') return errorPlan(404, 'unknown-route', 'no such route');

    if (url.pathname === '/variants') {
      return jsonPlan(200, [{ variant: 'base', versions: ['1.0'] }]);
    }
    if (url.pathname === '/openapi.json') {
      return jsonPlan(200, openapiDocument(this.characteristics));
    }
    if (url.pathname === '/profiles') {
      return jsonPlan(200, this.profiles);
    }
    if (segments[0] === 'profiles' && segments.length === 2) {
      const profile = this.profiles.find((p) => p.id === segments[1]);
      if (!profile) return errorPlan(404, 'unknown-profile', `no profile ${segments[1]}`);
      return jsonPlan(200, profile);
    }
    if (segments[0] === 'export' && segments.length === 2) {
      return this.exportBundle(segments[1] as string, query);
    }
    if (segments[0] === 'api') {
      return this.model(segments.slice(1), query);
    }
    return errorPlan(404, 'unknown-route', `no route for ${url.pathname}`);
  }

  private validateSelections(selections: Record<string, string>): Plan | null {
    for (const [key, value] of Object.entries(selections)) {
      const characteristic = this.characteristics[key];
      if (!characteristic) {
        return errorPlan(400, 'unknown-characteristic', `no characteristic ${key}`);
      }
      if (!characteristic.values.includes(value)) {
        return errorPlan(400, 'unknown-value', `no value ${value} for ${key}`);
      }
    }
    return null;
  }

  private createProfile(rawBody: unknown): Plan {
    let payload: any;
    try {
      payload = JSON.parse(String(rawBody));
    } catch {
      return errorPlan(400, 'schema-violation', 'body is not JSON');
    }
    if (typeof payload.name !== 'string' || payload.name.length === 0) {
      return errorPlan(400, 'schema-violation', 'profile needs a name');
    }
    const selections: Record<string, string> = payload.selections ?? {};
    const invalid = this.validateSelections(selections);
    if (invalid) return invalid;
    const variant = payload.variant ?? 'base';
    if (variant !== 'base') return errorPlan(404, 'unknown-variant', `no variant ${variant}`);
    const profile = {
      id: `p${this.profiles.length + 1}`,
      name: payload.name,
      variant,
      selections: { ...selections },
    };
    this.profiles.push(profile);
    return jsonPlan(201, profile);
  }

  private exportBundle(kind: string, query: Record<string, string>): Plan {
    delete query.variant;
    delete query.version;
    if (!['process-doc', 'doc-templates', 'project-plan'].includes(kind)) {
      return errorPlan(400, 'unsupported-export', `no export kind ${kind}`);
    }
    const invalid = this.validateSelections(query);
    if (invalid) return invalid;
    return {
      status: 200,
      body: fakeExportBytes(kind, query),
      contentType: 'application/zip',
      headers: { 'content-disposition': `attachment; filename="${kind}.zip"` },
    };
  }

  private model(segments: string[], query: Record<string, string>): Plan {
    let rest = segments;
    if (rest[0] === 'base') {
      if (rest[1] !== '1.0') return errorPlan(404, 'unknown-version', `no version ${rest[1]}`);
      rest = rest.slice(2);
    }
    const invalid = this.validateSelections(query);
    if (invalid) return invalid;

    const segment = rest[0];
    const type = ENDPOINTS.find((t) => t.toLowerCase() === segment);
    if (!type) return errorPlan(404, 'unknown-route', `no route for ${segments.join('/')}`);

    if (rest.length === 1) return xmlPlan(collectionXml(type, query));

    const element = ofType(type).find((e) => e.id === rest[1]);
    if (!element) return errorPlan(404, 'unknown-id', `no ${type} with id ${rest[1]}`);
    if (!applicable(element, query)) {
      return errorPlan(404, 'filtered', `${rest[1]} is not in the tailored process`);
    }

    if (rest.length === 2) return xmlPlan(byIdXml(element, query));

    if (rest.length === 3) {
      const wrapper = element.wrappers.find((w) => w.segment === rest[2]);
      if (!wrapper) return errorPlan(404, 'unknown-route', `no association ${rest[2]}`);
      return xmlPlan(nestedXml(element, wrapper, query));
    }
    return errorPlan(404, 'unknown-route', 'too many segments');
  }
}

/** Run queued microtasks and zero-delay timers so async UI handlers settle. */
export async function settle(rounds = 4): Promise<void> {
  for (let i = 0; i < rounds; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}
