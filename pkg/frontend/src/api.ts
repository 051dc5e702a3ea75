// HTTP client for the process model service. Every model fetch carries the
// caller's full selections map; nothing is cached here.

import { parseXml, type XmlNode } from './xml.js';

export interface VariantInfo {
  variant: string;
  versions: string[];
}

export interface Characteristic {
  key: string;
  label: string;
  values: string[];
}

export interface StoredProfile {
  id: string;
  name: string;
  variant: string;
  selections: Record<string, string>;
}

export interface Scope {
  variant: string | null;
  version: string | null;
  selections: Record<string, string>;
}

export interface ExportDownload {
  filename: string;
  bytes: Uint8Array;
}

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function raise(response: Response): Promise<never> {
  let code = 'error';
  let message = `request failed with status ${response.status}`;
  try {
    const body = await response.json();
    if (typeof body.code === 'string') code = body.code;
    if (typeof body.message === 'string') message = body.message;
    else if (typeof body.detail === 'string') message = body.detail;
  } catch {
    // non-JSON error body; keep the generic message
  }
  throw new ServiceError(response.status, code, message);
}

function withQuery(path: string, query: Record<string, string>): string {
  const params = new URLSearchParams(query);
  const encoded = params.toString();
  return encoded ? `${path}?${encoded}` : path;
}

export class ServiceClient {
  constructor(
    readonly baseUrl: string = '',
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async get(path: string): Promise<Response> {
    const response = await this.fetchFn(this.baseUrl + path);
    if (!response.ok) await raise(response);
    return response;
  }

  async variants(): Promise<VariantInfo[]> {
    return (await this.get('/variants')).json();
  }

  async openapiDocument(): Promise<any> {
    return (await this.get('/openapi.json')).json();
  }

  modelPath(route: string, scope: Scope): string {
    const prefix =
      scope.variant && scope.version
        ? `/api/${scope.variant}/${scope.version}`
        : '/api';
    return withQuery(`${prefix}/${route}`, scope.selections);
  }

  async fetchModel(route: string, scope: Scope): Promise<XmlNode> {
    const response = await this.get(this.modelPath(route, scope));
    return parseXml(await response.text());
  }

  async saveProfile(
    name: string,
    selections: Record<string, string>,
    variant?: string,
  ): Promise<StoredProfile> {
    const response = await this.fetchFn(this.baseUrl + '/profiles', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(variant ? { name, selections, variant } : { name, selections }),
    });
    if (!response.ok) await raise(response);
    return response.json();
  }

  async listProfiles(): Promise<StoredProfile[]> {
    return (await this.get('/profiles')).json();
  }

  async loadProfile(id: string): Promise<StoredProfile> {
    return (await this.get(`/profiles/${encodeURIComponent(id)}`)).json();
  }

  exportPath(kind: string, scope: Scope): string {
    const query: Record<string, string> = { ...scope.selections };
    if (scope.variant && scope.version) {
      query.variant = scope.variant;
      query.version = scope.version;
    }
    return withQuery(`/export/${kind}`, query);
  }

  async downloadExport(kind: string, scope: Scope): Promise<ExportDownload> {
    const response = await this.get(this.exportPath(kind, scope));
    const bytes = new Uint8Array(await response.arrayBuffer());
    const disposition = response.headers.get('content-disposition') ?? '';
    const match = /filename="([^"]+)"/.exec(disposition);
    return { filename: match?.[1] ?? `${kind}.zip`, bytes };
  }
}
