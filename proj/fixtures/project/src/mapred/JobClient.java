package org.apache.hadoop.mapred;

public class JobClient {
    /**
     * Submits the application to the resource manager and returns its id.
     */
    public String submitJob(AppManagerStub stub, String jobId) {
        LOG.info("Submitting job " + jobId);
        String appId = stub.submitApplication(jobId);
        return appId;
    }

    /**
     * Removes the temporary staging directory of the given job.
     */
    public void cleanupStagingArea(String stagingDir) {
        LOG.info("Cleaning up the staging area " + stagingDir);
    }

    /**
     * Watches the submitted application until it reaches a final state.
     */
    public void monitorJob(AppManagerStub stub, String jobId, String node) {
        String report = stub.getAppReport(jobId);
        if (report == null) {
            cleanupStagingArea(jobId);
        }
        LOG.info("Job created, executing " + jobId + " on node " + node);
    }

    /**
     * Waits for a response to the given operation, noting progress so far.
     */
    public void waitForResponse(String elapsed, String timeout, String op, String received, boolean hasTimeout) {
        String msg = "Waited " + elapsed + " ms";
        if (hasTimeout) {
            msg = msg + " (timeout=" + timeout + ")";
        }
        msg = msg + " for a response for " + op;
        if (received == 0) {
            msg = msg + ". No responses yet.";
        } else {
            msg = msg + ". Received " + received + " responses.";
        }
        LOG.warn(msg);
    }
}
